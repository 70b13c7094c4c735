import pytest
from hypothesis import HealthCheck, settings

from stieltjes import DensityPiece, Derivator, single_jump_derivator

settings.register_profile(
    "numeric",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numeric")


@pytest.fixture
def d_jump():
    """g(t) = t plus a jump of 0.5 at t=1, on [0, 2]."""
    return single_jump_derivator(2.0, 1.0, 0.5)


@pytest.fixture
def d_plateau():
    """Unit density, flat on (1, 2), jump of 0.25 at the plateau's left edge."""
    return Derivator(
        T=3.0,
        density_pieces=(
            DensityPiece(0.0, 1.0, "const", 1.0),
            DensityPiece(1.0, 2.0, "zero"),
            DensityPiece(2.0, 3.0, "const", 1.0),
        ),
        jumps=((1.0, 0.25),),
    )


@pytest.fixture
def d_two_jumps():
    """Polynomial density with two interior jumps on [0, 2]."""
    return Derivator(
        T=2.0,
        density_pieces=(
            DensityPiece(0.0, 1.0, "const", 0.5),
            DensityPiece(1.0, 2.0, "poly", (0.5, 0.75)),
        ),
        jumps=((0.7, 0.3), (1.4, 0.2)),
    )
