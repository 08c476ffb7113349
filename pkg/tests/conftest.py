import pytest

from hsc.linalg import Q, ONE
from hsc.lie import LieAlgebra, LieModule, build_triple
from hsc.spectral import SpectralSequence
from hsc.rootdata import build_root_datum
from hsc.bk import BKInstance, ParabolicDatum


def _sl2sq():
    return LieAlgebra.sl2().direct_sum(LieAlgebra.sl2())


def _triple_seq(g, k_cols, ideal_cols, module=None):
    t = build_triple(g, k_cols, ideal_cols)
    return SpectralSequence(t, module or LieModule.trivial(g.dim, 1))


def _builders():
    sl2 = LieAlgebra.sl2
    return {
        "sl2_h_adjoint": lambda: _triple_seq(
            sl2(), [{2: ONE}], [], LieModule.adjoint(sl2())
        ),
        "sl2_full_ideal": lambda: _triple_seq(
            sl2(), [], [{0: ONE}, {1: ONE}, {2: ONE}]
        ),
        "abelian": lambda: _triple_seq(
            LieAlgebra.abelian(3), [{0: ONE}], [{1: ONE}, {2: ONE}]
        ),
        "heisenberg": lambda: _triple_seq(
            LieAlgebra.heisenberg(), [], [{2: ONE}]
        ),
        "sl2sq": lambda: _triple_seq(
            _sl2sq(), [{2: ONE}, {5: ONE}], [{0: ONE}, {1: ONE}, {2: ONE}]
        ),
        "sl2sq_adjoint": lambda: _triple_seq(
            _sl2sq(),
            [{2: ONE}, {5: ONE}],
            [{0: ONE}, {1: ONE}, {2: ONE}],
            LieModule.adjoint(_sl2sq()),
        ),
        "a2_bk_0": lambda: _a2_instance(()).spectral,
        "a2_bk_1": lambda: _a2_instance((1,)).spectral,
        "a2_bk_2": lambda: _a2_instance((2,)).spectral,
        "a2_bk_12": lambda: _a2_instance((1, 2)).spectral,
    }


_A2 = None


def _a2_instance(support):
    global _A2
    if _A2 is None:
        _A2 = ParabolicDatum(build_root_datum("A2"), [])
    return BKInstance(_A2, support)


CORPUS_NAMES = list(_builders())
TRIVIAL_CORPUS = [n for n in CORPUS_NAMES if not n.endswith("adjoint")]


@pytest.fixture(scope="session")
def corpus():
    built = {}

    def get(name):
        if name not in built:
            built[name] = _builders()[name]()
        return built[name]

    return get


@pytest.fixture(scope="session")
def a2_parabolic():
    return ParabolicDatum(build_root_datum("A2"), [])
