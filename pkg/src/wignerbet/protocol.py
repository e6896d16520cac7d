"""Sequenced betting protocols against announced measurement distributions.

Four players: an experimenter chooses states and observables, a forecaster
announces distributions (either the outcome distribution directly, or a
phase-space density committed before the observable is chosen), a skeptic
bets against the forecast with nonnegative unit-mean stakes, and a reality
produces outcomes. The skeptic's capital multiplies by the bet's payoff each
round and is tracked exactly in log space.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .densities import (
    ProbabilityDensity1D,
    Sampler,
    SignedDensity2D,
    density_digest,
    expectation,
    l1_distance,
    pushforward_linear,
    to_probability,
)
from .errors import (
    BoundViolationError,
    NegativityError,
    NumericalIntegrityError,
    ProtocolViolationError,
)
from .grids import Grid1D
from .quadrature import QuadratureSpec, quadrature_distribution
from .states import WaveFunction, state_from_spec
from .wigner import wigner

BET_TOL = 1e-6
DUAL_ROUTE_TOL = 1e-5

# Named bounded payoff functions for CLI configs and transcripts.
FUNCTIONS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "one": lambda z: np.ones_like(z),
    "z": lambda z: np.asarray(z, dtype=float),
    "z2": lambda z: np.asarray(z, dtype=float) ** 2,
    "cos": np.cos,
}


def resolve_function(F):
    if callable(F):
        return F
    try:
        return FUNCTIONS[F]
    except KeyError:
        raise KeyError(f"unknown payoff function {F!r}; known: {sorted(FUNCTIONS)}") from None


# ---------------------------------------------------------------------------
# moves and records

@dataclass(frozen=True)
class Bet:
    """Grid-evaluable stake: piecewise-linear values over the forecast grid."""

    values: np.ndarray
    descriptor: dict

    def payoff(self, grid: Grid1D, outcome: float) -> float:
        return float(np.interp(outcome, grid.points, self.values))


class BetValidation(NamedTuple):
    ok: bool
    reason: Optional[str]
    integral: float
    min_value: float


def validate_bet(f, mu: ProbabilityDensity1D, tol: float = BET_TOL) -> BetValidation:
    """Check nonnegativity and unit forecast-mean of a bet against forecast mu.

    `f` may be a Bet, a value array aligned with mu's grid, or a callable
    evaluated on the grid. A failure is reported as a value, not an exception.
    """
    if isinstance(f, Bet):
        values = f.values
    elif callable(f):
        values = np.asarray(f(mu.grid.points), dtype=float)
    else:
        values = np.asarray(f, dtype=float)
    if values.shape != mu.values.shape:
        return BetValidation(False, f"bet shape {values.shape} does not match forecast grid", math.nan, math.nan)
    if not np.all(np.isfinite(values)):
        return BetValidation(False, "bet contains non-finite values", math.nan, math.nan)
    min_value = float(values.min())
    integral = float(mu.grid.dx * np.sum(values * mu.values))
    if min_value < 0:
        return BetValidation(False, f"nonnegativity violated: min value {min_value!r}", integral, min_value)
    if abs(integral - 1.0) > tol:
        return BetValidation(False, f"forecast mean {integral!r} deviates from 1 beyond {tol}", integral, min_value)
    return BetValidation(True, None, integral, min_value)


@dataclass
class Round:
    index: int
    state_spec: str
    a: float
    b: float
    forecast_hash: str
    bet_descriptor: dict
    outcome: float
    log_payoff: float
    log_capital: float
    clipped: bool = False
    commit_event: Optional[int] = None
    quad_event: Optional[int] = None
    cross_route_l1: Optional[float] = None
    forecast: Optional[ProbabilityDensity1D] = field(default=None, repr=False)
    forecast_2d: Optional[SignedDensity2D] = field(default=None, repr=False)
    bet_values: Optional[np.ndarray] = field(default=None, repr=False)

    def jsonl_record(self) -> dict:
        record = {
            "n": self.index,
            "state_spec": self.state_spec,
            "forecast_hash": self.forecast_hash,
            "a": self.a,
            "b": self.b,
            "bet_descriptor": self.bet_descriptor,
            "r": self.outcome,
            "log_capital": self.log_capital,
        }
        if self.clipped:
            record["clipped"] = True
        if self.commit_event is not None:
            record["commit_event"] = self.commit_event
            record["quad_event"] = self.quad_event
        if self.cross_route_l1 is not None:
            record["cross_route_l1"] = self.cross_route_l1
        return record


@dataclass
class Transcript:
    protocol: int
    seed: Optional[int]
    config: dict
    rounds: list[Round] = field(default_factory=list)
    forecast_failure: Optional[dict] = None

    @property
    def final_log_capital(self) -> float:
        return self.rounds[-1].log_capital if self.rounds else 0.0

    @property
    def sup_log_capital(self) -> float:
        running = 0.0
        for r in self.rounds:
            running = max(running, r.log_capital)
        return running

    def jsonl_lines(self) -> list[str]:
        return [json.dumps(r.jsonl_record(), sort_keys=True) for r in self.rounds]

    def summary_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "seed": self.seed,
            "rounds": len(self.rounds),
            "final_log_capital": self.final_log_capital,
            "sup_log_capital": self.sup_log_capital,
            "forecast_failure": self.forecast_failure,
            "config": self.config,
        }


# ---------------------------------------------------------------------------
# players

class StateResolver:
    """Memoizing fixture-spec -> WaveFunction factory for one grid and hbar."""

    def __init__(self, grid: Grid1D, hbar: float):
        self.grid = grid
        self.hbar = hbar
        self._cache: dict[str, WaveFunction] = {}

    def __call__(self, spec: str) -> WaveFunction:
        if spec not in self._cache:
            self._cache[spec] = state_from_spec(spec, self.grid, self.hbar)
        return self._cache[spec]


class FixedExperimenter:
    """Announces the same state and observable every round."""

    def __init__(self, state_spec: str, quad: QuadratureSpec):
        self._spec = state_spec
        self._quad = quad

    def state_spec(self, n: int) -> str:
        return self._spec

    def observable(self, n: int) -> QuadratureSpec:
        return self._quad


class CycleExperimenter:
    """Cycles deterministically through all state/observable combinations."""

    def __init__(self, state_specs: Sequence[str], quads: Sequence[QuadratureSpec]):
        if not state_specs or not quads:
            raise ValueError("need at least one state and one observable")
        self._specs = list(state_specs)
        self._quads = list(quads)

    def state_spec(self, n: int) -> str:
        k = (n - 1) % (len(self._specs) * len(self._quads))
        return self._specs[k % len(self._specs)]

    def observable(self, n: int) -> QuadratureSpec:
        k = (n - 1) % (len(self._specs) * len(self._quads))
        return self._quads[k // len(self._specs)]


class HonestForecaster:
    """Announces the true distributions implied by the announced state.

    Outcome distributions come from the spectral route; phase-space
    announcements are the transform of the true state. Both are memoized per
    fixture spec, and a prebuilt phase-space cache may be injected.
    """

    def __init__(self, oversample: int = 8, phase_space_cache: Optional[dict] = None):
        self._oversample = oversample
        self._dist_cache: dict = {}
        self._ps_cache: dict = dict(phase_space_cache) if phase_space_cache else {}

    def distribution(self, n: int, state_spec: str, psi: WaveFunction,
                     quad: QuadratureSpec) -> ProbabilityDensity1D:
        key = (state_spec, quad.a, quad.b)
        if key not in self._dist_cache:
            self._dist_cache[key] = quadrature_distribution(psi, quad)
        return self._dist_cache[key]

    def phase_space(self, n: int, state_spec: str, psi: WaveFunction) -> SignedDensity2D:
        if state_spec not in self._ps_cache:
            self._ps_cache[state_spec] = wigner(psi, oversample=self._oversample)
        return self._ps_cache[state_spec]


class DishonestForecaster:
    """Always announces the phase-space density of a fixed state, ignoring
    what the experimenter actually prepared."""

    def __init__(self, announced_spec: str, oversample: int = 8):
        self.announced_spec = announced_spec
        self._oversample = oversample
        self._density: Optional[SignedDensity2D] = None

    def phase_space(self, n: int, state_spec: str, psi: WaveFunction) -> SignedDensity2D:
        if self._density is None:
            announced = state_from_spec(self.announced_spec, psi.grid, psi.hbar)
            self._density = wigner(announced, oversample=self._oversample)
        return self._density


class ConstantSkeptic:
    """Places the identity bet f = 1; capital never moves."""

    def bet(self, n: int, forecast: ProbabilityDensity1D) -> Bet:
        return Bet(np.ones(forecast.grid.n_points), {"kind": "unit"})

    def settle(self, n: int, outcome: float) -> None:
        pass


class LLNSkeptic:
    """Mixture of linear bets that forces the long-run average of F(r) toward
    the forecast means.

    For each rate lam in {+-2^-k / C : k < depth} a side account holds capital
    K_lam, updated with the bet 1 + lam * (F(r) - mean_n). The announced bet is
    their capital-weighted average, which is nonnegative with unit forecast
    mean by construction. C must bound |F - mean_n| on the forecast grid.
    """

    def __init__(self, F, C: float, depth: int = 4):
        if C <= 0:
            raise ValueError("C must be positive")
        if depth < 1:
            raise ValueError("depth must be >= 1")
        self._F = resolve_function(F)
        self._F_name = F if isinstance(F, str) else getattr(F, "__name__", "custom")
        self.C = float(C)
        rates = [2.0**-k / C for k in range(depth)]
        self._lam = np.array([r * s for r in rates for s in (1.0, -1.0)])
        self._log_wealth = np.zeros(len(self._lam))
        self._context = None
        self._prepared: dict = {}  # id(forecast) -> precomputed F data

    def _prepare(self, forecast: ProbabilityDensity1D):
        key = id(forecast)
        hit = self._prepared.get(key)
        if hit is None:
            points = forecast.grid.points
            f_values = np.asarray(self._F(points), dtype=float)
            mean = float(forecast.grid.dx * np.sum(f_values * forecast.values))
            hit = (forecast, points, f_values, mean, f_values - mean)
            self._prepared[key] = hit
        return hit[1:]

    def bet(self, n: int, forecast: ProbabilityDensity1D) -> Bet:
        points, f_values, mean, deviation = self._prepare(forecast)
        worst = float(np.abs(deviation).max())
        if worst > self.C:
            raise BoundViolationError(
                f"|F - forecast mean| reaches {worst:.6g} on the grid, above the bound C = {self.C}"
            )
        shifted = self._log_wealth - self._log_wealth.max()
        weights = np.exp(shifted)
        weights /= weights.sum()
        lam_eff = float(np.sum(weights * self._lam))
        values = np.maximum(1.0 + lam_eff * deviation, 0.0)
        self._context = (points, f_values, mean)
        return Bet(values, {"kind": "lln_mixture", "F": self._F_name, "C": self.C,
                            "lambda_eff": lam_eff, "forecast_mean": mean})

    def settle(self, n: int, outcome: float) -> None:
        points, f_values, mean = self._context
        f_at_outcome = float(np.interp(outcome, points, f_values))
        growth = 1.0 + self._lam * (f_at_outcome - mean)
        with np.errstate(divide="ignore"):
            self._log_wealth += np.log(np.maximum(growth, 0.0))


def lln_skeptic_strategy(F, C: float, depth: int = 4) -> LLNSkeptic:
    """Capital-forcing skeptic for the law-of-large-numbers event (see LLNSkeptic)."""
    return LLNSkeptic(F, C, depth)


class FaithfulReality:
    """Samples the true outcome distribution of the announced state/observable."""

    def __init__(self):
        self._samplers: dict = {}

    def _sampler(self, state_spec: str, psi: WaveFunction, quad: QuadratureSpec) -> Sampler:
        key = (state_spec, quad.a, quad.b)
        if key not in self._samplers:
            self._samplers[key] = Sampler(quadrature_distribution(psi, quad))
        return self._samplers[key]

    def outcome(self, n, state_spec, psi, quad, forecast, bet, rng) -> float:
        return self._sampler(state_spec, psi, quad).draw(rng)


class ShiftedReality(FaithfulReality):
    """Faithful sampling with a constant additive offset: a parametric deviation
    from the announced physics."""

    def __init__(self, delta: float):
        super().__init__()
        self.delta = float(delta)

    def outcome(self, n, state_spec, psi, quad, forecast, bet, rng) -> float:
        return super().outcome(n, state_spec, psi, quad, forecast, bet, rng) + self.delta


class ArgmaxReality:
    """Adversary that always reports the outcome the skeptic pays most for."""

    def outcome(self, n, state_spec, psi, quad, forecast, bet, rng) -> float:
        return float(forecast.grid.points[int(np.argmax(bet.values))])


class FixedReality:
    """Always reports the same outcome."""

    def __init__(self, value: float):
        self.value = float(value)

    def outcome(self, n, state_spec, psi, quad, forecast, bet, rng) -> float:
        return self.value


# ---------------------------------------------------------------------------
# engine

def _as_rng(rng_or_seed):
    if isinstance(rng_or_seed, np.random.Generator):
        return rng_or_seed, None
    seed = int(rng_or_seed)
    return np.random.default_rng(seed), seed


def _digest_memo(cache: dict, density) -> str:
    key = id(density)
    if key not in cache:
        cache[key] = (density, density_digest(density))
    return cache[key][1]


def _settle_round(transcript, skeptic, reality, rng, n, state_spec, psi,
                  quad, forecast, bet, bet_tol, record_arrays, extra) -> None:
    check = validate_bet(bet, forecast, bet_tol)
    if not check.ok:
        raise ProtocolViolationError("skeptic", n, check.reason)
    raw = float(reality.outcome(n, state_spec, psi, quad, forecast, bet, rng))
    if not np.isfinite(raw):
        raise ProtocolViolationError("reality", n, f"non-finite outcome {raw!r}")
    lo = float(forecast.grid.points[0])
    hi = float(forecast.grid.points[-1])
    outcome = min(max(raw, lo), hi)
    clipped = outcome != raw

    payoff = bet.payoff(forecast.grid, outcome)
    log_payoff = math.log(payoff) if payoff > 0 else -math.inf
    previous = transcript.rounds[-1].log_capital if transcript.rounds else 0.0
    log_capital = previous + log_payoff

    skeptic.settle(n, outcome)
    transcript.rounds.append(Round(
        index=n,
        state_spec=state_spec,
        a=quad.a,
        b=quad.b,
        bet_descriptor=bet.descriptor,
        outcome=outcome,
        log_payoff=log_payoff,
        log_capital=log_capital,
        clipped=clipped,
        forecast=forecast,
        bet_values=bet.values if record_arrays else None,
        **extra,
    ))


def run_protocol1(experimenter, forecaster, skeptic, reality, n_rounds: int,
                  rng_or_seed, resolver: StateResolver, bet_tol: float = BET_TOL,
                  record_arrays: bool = True, config: Optional[dict] = None) -> Transcript:
    """Run the direct testing protocol: the forecaster announces the outcome
    distribution after seeing the state and observable.

    Each round: the experimenter announces (state, observable); the forecaster
    announces the outcome distribution; the skeptic stakes a validated bet;
    reality reports an outcome (clipped to the forecast grid and flagged if
    outside); capital multiplies by the bet's payoff, in log space.
    """
    if n_rounds < 1:
        raise ValueError("n_rounds must be >= 1")
    rng, seed = _as_rng(rng_or_seed)
    transcript = Transcript(protocol=1, seed=seed, config=dict(config or {}))
    digests: dict = {}
    for n in range(1, n_rounds + 1):
        state_spec = experimenter.state_spec(n)
        psi = resolver(state_spec)
        quad = experimenter.observable(n)
        forecast = forecaster.distribution(n, state_spec, psi, quad)
        bet = skeptic.bet(n, forecast)
        _settle_round(
            transcript, skeptic, reality, rng, n, state_spec, psi, quad,
            forecast, bet, bet_tol, record_arrays,
            {"forecast_hash": _digest_memo(digests, forecast)},
        )
    return transcript


def run_protocol2(experimenter, forecaster, skeptic, reality, n_rounds: int,
                  rng_or_seed, resolver: StateResolver, bet_tol: float = BET_TOL,
                  record_arrays: bool = True, verify_rounds: bool = False,
                  config: Optional[dict] = None) -> Transcript:
    """Run the committed-forecast protocol.

    The forecaster sees only the state and commits (hash, logical event index)
    to a full phase-space density before the experimenter reveals the
    observable. The engine then derives the implied outcome distribution by
    pushforward and hands only that to the skeptic. A derived distribution
    with genuinely negative mass ends the run: the forecaster has announced
    something no outcome distribution realizes, recorded as forecast_failure.

    With verify_rounds=True the derived distribution is also checked against
    the independent spectral route and the L1 gap recorded per round.
    """
    if n_rounds < 1:
        raise ValueError("n_rounds must be >= 1")
    rng, seed = _as_rng(rng_or_seed)
    transcript = Transcript(protocol=2, seed=seed, config=dict(config or {}))
    digests: dict = {}
    derived_cache: dict = {}
    spectral_cache: dict = {}
    event_clock = 0
    for n in range(1, n_rounds + 1):
        state_spec = experimenter.state_spec(n)
        psi = resolver(state_spec)

        announced = forecaster.phase_space(n, state_spec, psi)
        commit_hash = _digest_memo(digests, announced)
        event_clock += 1
        commit_event = event_clock

        quad = experimenter.observable(n)
        event_clock += 1
        quad_event = event_clock

        key = (id(announced), quad.a, quad.b)
        if key not in derived_cache:
            try:
                derived = to_probability(pushforward_linear(announced, quad.a, quad.b))
            except NegativityError as exc:
                transcript.forecast_failure = {
                    "round": n,
                    "state_spec": state_spec,
                    "a": quad.a,
                    "b": quad.b,
                    "negative_mass": exc.negative_mass,
                }
                return transcript
            derived_cache[key] = (announced, derived)
        forecast = derived_cache[key][1]

        extra = {
            "forecast_hash": commit_hash,
            "commit_event": commit_event,
            "quad_event": quad_event,
            "forecast_2d": announced,
        }
        if verify_rounds:
            skey = (state_spec, quad.a, quad.b)
            if skey not in spectral_cache:
                spectral_cache[skey] = quadrature_distribution(psi, quad)
            extra["cross_route_l1"] = l1_distance(forecast, spectral_cache[skey])

        bet = skeptic.bet(n, forecast)
        _settle_round(transcript, skeptic, reality, rng, n, state_spec,
                      psi, quad, forecast, bet, bet_tol, record_arrays, extra)
    return transcript


def discrepancy_statistic(transcript: Transcript, F) -> np.ndarray:
    """Running means D_N = (1/N) sum_n (F(r_n) - forecast mean of F).

    For committed-forecast rounds the forecast mean is computed both from the
    derived outcome distribution and as the phase-space integral of
    F(a*x + b*p); the two routes must agree within 1e-5.
    """
    F = resolve_function(F)
    terms = np.empty(len(transcript.rounds))
    phase_space_means: dict = {}
    for i, rnd in enumerate(transcript.rounds):
        mean_1d = expectation(rnd.forecast, F)
        if rnd.forecast_2d is not None:
            key = (id(rnd.forecast_2d), rnd.a, rnd.b)
            if key not in phase_space_means:
                W = rnd.forecast_2d
                z = rnd.a * W.x_grid.points[:, None] + rnd.b * W.p_grid.points[None, :]
                mean_2d = float(W.x_grid.dx * W.p_grid.dx * np.sum(F(z) * W.values))
                phase_space_means[key] = (W, mean_2d)
            mean_2d = phase_space_means[key][1]
            if abs(mean_1d - mean_2d) >= DUAL_ROUTE_TOL:
                raise NumericalIntegrityError(
                    f"round {rnd.index}: forecast mean differs between routes: "
                    f"{mean_1d!r} (derived) vs {mean_2d!r} (phase space)"
                )
        terms[i] = float(F(np.asarray(rnd.outcome))) - mean_1d
    return np.cumsum(terms) / np.arange(1, len(terms) + 1)


def rng_streams(seed: int, count: int) -> list[np.random.Generator]:
    """Independent, reproducible generators for parallel or repeated runs."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


__all__ = [
    "Bet",
    "BetValidation",
    "validate_bet",
    "Round",
    "Transcript",
    "StateResolver",
    "FixedExperimenter",
    "CycleExperimenter",
    "HonestForecaster",
    "DishonestForecaster",
    "ConstantSkeptic",
    "LLNSkeptic",
    "lln_skeptic_strategy",
    "FaithfulReality",
    "ShiftedReality",
    "ArgmaxReality",
    "FixedReality",
    "run_protocol1",
    "run_protocol2",
    "discrepancy_statistic",
    "rng_streams",
    "FUNCTIONS",
    "resolve_function",
]
