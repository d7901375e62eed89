import pytest

from app.models.errors import SizeCapExceeded, VerificationFailed
from app.services.verification_service import RAW_ENUMERATION_COUNTS, verification_service


class TestChecks:
    def test_check_names(self):
        assert list(verification_service.checks()) == [
            "spectrum-counts", "representation", "characterization", "spectral", "dual-equivalence",
            "dictionary", "subset-calculus", "negative-controls", "enumeration-oracle", "corpus",
        ]

    def test_negative_controls(self):
        passed, detail, witness = verification_service.check_negative_controls()
        assert passed, witness

    def test_spectrum_counts(self):
        passed, detail, witness = verification_service.check_spectrum_counts()
        assert passed, witness

    def test_corpus(self):
        passed, detail, witness = verification_service.check_corpus()
        assert passed, detail

    def test_enumeration_oracle(self):
        passed, detail, witness = verification_service.check_enumeration_oracle()
        assert passed, witness
        assert sorted(RAW_ENUMERATION_COUNTS) == [1, 2, 3, 4, 5, 6]

    def test_dual_equivalence_covers_uvo_map_composition(self):
        passed, detail, witness = verification_service.check_dual_equivalence()
        assert passed, witness
        assert "composable UVO-map pairs" in detail
        assert not detail.endswith(" 0 composable UVO-map pairs")

    def test_dictionary(self):
        passed, detail, witness = verification_service.check_dictionary()
        assert passed, witness

    def test_spectral_and_subset_calculus(self):
        assert verification_service.check_spectral()[0]
        assert verification_service.check_subset_calculus()[0]


class TestRunner:
    def test_run_all_filters_by_name(self):
        results = verification_service.run_all(["negative-controls", "corpus"])
        assert [r.name for r in results] == ["negative-controls", "corpus"]
        assert all(r.passed for r in results)
        assert all(r.seconds >= 0 for r in results)

    def test_enumeration_bound(self):
        results = verification_service.run_all(["spectrum-counts"], n_max=4)
        assert results[0].passed
        assert max(L.n for L in verification_service.enumerated()) == 4
        with pytest.raises(SizeCapExceeded):
            verification_service.run_all(["spectrum-counts"], n_max=11)
        verification_service.run_all(["negative-controls"])
        assert verification_service.n_max == verification_service.enumerate_default

    def test_errors_become_failed_results(self):
        def broken():
            raise VerificationFailed("demo", "witness text")

        result = verification_service.run("demo", broken)
        assert not result.passed
        assert result.detail == "VerificationFailed"
        assert "witness text" in result.witness

    def test_failed_outcome_keeps_its_witness(self):
        result = verification_service.run("demo", lambda: (False, "count", "3 ≠ 4"))
        assert not result.passed
        assert (result.detail, result.witness) == ("count", "3 ≠ 4")
