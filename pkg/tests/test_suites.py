import pytest

from src.config.corpus import build_entry, read_manifest
from src.config.settings import EngineConfig
from src.handlers.dispatch import run_corpus
from src.models.reports import CorpusEntry
from src.tools.suites import SUITES, closed_form_sweep, run_suite


def _entry(entry_id, **fields):
    entry = CorpusEntry(id=entry_id, **fields)
    return entry, build_entry(entry)


@pytest.mark.parametrize("suite", ["thm1.1", "thm1.3", "lemmas3", "lemma4", "mckay-navarro", "detector",
                                   "pq-witness", "orthogonality", "bounds", "kernel-lemma", "two-rational",
                                   "blockwise"])
def test_group_suites_pass_on_sym4(suite):
    entry, G = _entry("sym4", construct=["sym", [4]], tags=["sym"])
    result = run_suite(suite, entry, G)
    assert result.status in ("pass", "skip"), [c.violations for c in result.checks]
    assert result.status == "pass" or suite == "lemmas3"


def test_abelian_suite():
    entry, G = _entry("c3_x_c9", construct={"construct": "direct_product", "params": [["cyclic", [3]], ["cyclic", [9]]]})
    result = run_suite("abelian", entry, G)
    assert result.status == "pass"
    assert result.checks[0].facts["frattini_index"] == 9
    entry, G = _entry("sym3", construct=["sym", [3]])
    assert run_suite("abelian", entry, G).status == "skip"


@pytest.mark.slow
@pytest.mark.parametrize("entry_id, frattini_index", [("c729", 3), ("c3_x_c9_x_c27", 27)])
def test_abelian_suite_on_order_729(entry_id, frattini_index):
    entry = read_manifest().get(entry_id)
    result = run_suite("abelian", entry, build_entry(entry))
    assert result.status == "pass", result.checks[0].violations
    assert result.checks[0].facts["parat"] == frattini_index
    assert result.checks[0].facts["frattini_index"] == frattini_index


def test_alt_bounds_record_outer_classes():
    entry, G = _entry("alt6", construct=["alt", [6]], tags=["alt"])
    result = run_suite("bounds", entry, G)
    assert result.status == "pass"
    assert result.checks[0].facts["k_star"] == 5


@pytest.mark.parametrize("suite", ["affine-oracle", "closed-form", "coefficients"])
def test_matrix_suites(suite):
    entry, H = _entry("affine_13_1_e3", matgroup={"construct": "cyclic_matgroup", "params": [13, 3]})
    assert run_suite(suite, entry, H).status == "pass"


def test_affine_oracle_on_plane():
    entry, H = _entry("affine_3_2_minus_i", matgroup={"construct": "scalar_matgroup", "params": [3, 2, -1]})
    result = run_suite("affine-oracle", entry, H)
    assert result.status == "pass"
    facts = result.checks[0].facts
    assert facts["k_hv"] == facts["oracle"] == 6
    assert facts["burnside"] == 5


def test_group_suites_skip_matrix_entries():
    entry, H = _entry("affine_5_1_gen2", matgroup={"p": 5, "n": 1, "generators": [[[2]]]})
    assert run_suite("thm1.1", entry, H).status == "skip"
    entry, G = _entry("sym3", construct=["sym", [3]])
    assert run_suite("closed-form", entry, G).status == "skip"


def test_closed_form_sweep_small_primes():
    report = closed_form_sweep(max_p=31)
    assert report.passed, report.violations
    assert report.facts["instances"] == 49


def test_closed_form_suite_carries_the_sweep():
    entry, H = _entry("affine_13_1_e3", matgroup={"construct": "cyclic_matgroup", "params": [13, 3]})
    result = run_suite("closed-form", entry, H)
    sweep = result.checks[1]
    assert sweep.name == "metacyclic_sweep"
    assert sweep.facts == {"max_p": 31, "instances": 49}


@pytest.mark.slow
def test_closed_form_sweep_to_200():
    report = closed_form_sweep(max_p=200)
    assert report.passed, report.violations
    assert report.facts["instances"] == 354


@pytest.mark.parametrize("entry_id, construct", [
    ("q8", ["quaternion", [8]]),
    ("dihedral_4", ["dihedral", [4]]),
    ("c8", ["cyclic", [8]]),
])
def test_orthogonality_suite_checks_brauer_lemma_on_2_groups(entry_id, construct):
    entry, G = _entry(entry_id, construct=construct)
    result = run_suite("orthogonality", entry, G)
    assert result.status == "pass"
    brauer = result.checks[1]
    assert brauer.name == "brauer_permutation"
    assert brauer.facts["galois_elements_tested"] >= 2


def test_thm11_suite_records_parat_statistics():
    entry, G = _entry("sym4", construct=["sym", [4]])
    stats = run_suite("thm1.1", entry, G).details["statistics"]
    assert stats["2"]["parat_over_p"] == "5/2"
    assert set(stats) == {"2", "3"}


@pytest.mark.slow
def test_full_corpus_has_no_failures(monkeypatch):
    monkeypatch.setattr(EngineConfig, "CLOSED_FORM_MAX_P", 200)
    manifest = read_manifest()
    run = run_corpus(manifest, list(SUITES), jobs=2)
    assert run.failures == []
