import pytest

from fuskit import fusion as fz
from fuskit import permgroup as pg
from fuskit.corpus import load_corpus, shipped_corpus_dir
from fuskit.serialization import _seed_from_dict


@pytest.fixture(scope="session")
def corpus_entries():
    return {e.name: e for e in load_corpus(shipped_corpus_dir())}


@pytest.fixture(scope="session")
def groups(corpus_entries):
    return {name: entry.load_group() for name, entry in corpus_entries.items()}


@pytest.fixture(scope="session")
def s4_system(groups):
    return fz.fusion_from_group(groups["s4"], 2)


@pytest.fixture(scope="session")
def d8_system(groups):
    return fz.fusion_from_group(groups["d8"], 2)


@pytest.fixture(scope="session")
def a6_system(groups):
    return fz.fusion_from_group(groups["a6"], 2)


@pytest.fixture(scope="session")
def e16_seeded(corpus_entries, groups):
    entry = corpus_entries["e16"]
    G = groups["e16"]
    spec = entry.generated_systems[0]
    seeds = [_seed_from_dict(G, s) for s in spec["seed_morphisms"]]
    return fz.fusion_generated(G, 2, seeds)


def v4_of(s4_system):
    return pg.core_p(s4_system.parent, 2)


@pytest.fixture(scope="session")
def v4(s4_system):
    return v4_of(s4_system)
