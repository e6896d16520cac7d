"""Phase-space quasiprobability densities for one-particle states, their
quadrature outcome distributions, and betting protocols that test them."""

from .densities import (
    ProbabilityDensity1D,
    Sampler,
    SignedDensity1D,
    SignedDensity2D,
    density_digest,
    expectation,
    l1_distance,
    negative_volume,
    pushforward_linear,
    sample,
    to_probability,
    total_mass,
)
from .errors import (
    BoundViolationError,
    ConfigurationError,
    DegeneracyError,
    DomainError,
    NegativityError,
    NumericalIntegrityError,
    ProtocolViolationError,
    WignerBetError,
)
from .grids import Grid1D, make_grid
from .protocol import (
    Bet,
    ConstantSkeptic,
    CycleExperimenter,
    DishonestForecaster,
    FaithfulReality,
    FixedExperimenter,
    FixedReality,
    HonestForecaster,
    LLNSkeptic,
    ArgmaxReality,
    ShiftedReality,
    StateResolver,
    Transcript,
    discrepancy_statistic,
    lln_skeptic_strategy,
    rng_streams,
    run_protocol1,
    run_protocol2,
    validate_bet,
)
from .quadrature import QuadratureSpec, frft, interval_probability, quadrature_distribution
from .states import (
    WaveFunction,
    fock_state,
    fourier_state,
    gaussian_state,
    inner_product,
    state_from_spec,
    superpose,
)
from .verify import cross_route_report, sweep_directions
from .wigner import marginal_p, marginal_x, purity, wigner

__version__ = "0.1.0"
