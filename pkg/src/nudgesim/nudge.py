"""Trust-aware recommendation dynamics.

A simulated user trusts a small set of sources (at most ``L``). Each step the
engine offers the cheapest strictly-higher-quality source, where cost blends
leaning distance with embedding distance:

    t(s', u) = (1 - alpha) * |l_u - l_s'| / 2 + alpha * (1 - cos(v_u, v_s'))

Below capacity the offer is accepted with probability max(0, 1 - t); at
capacity a lottery proportional to each candidate's trust cost evicts one of
the current members or the offer itself (eviction of the offer = rejection).
An unconstrained baseline picks the highest-quality eligible source instead,
with identical acceptance mechanics.

Randomness: one PCG64 substream per user, derived from the run seed and a
SHA-256 hash of the user id, consuming exactly one uniform draw per stochastic
decision — trajectories are reproducible across platforms.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .embedding import SourceVectors, cosine_distance
from .groundtruth import SourceScore

DEFAULT_ALPHA = 0.5
DEFAULT_EPSILON = 1e-9

TRAJECTORY_FIELDS = ["t", "recommended", "trust_cost", "accept_prob", "accepted", "dropped", "q_u", "l_u"]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True, eq=False)
class Source:
    source_id: str
    quality: float
    leaning: float
    vector: np.ndarray

    def __post_init__(self) -> None:
        if not (0.0 <= self.quality <= 1.0):
            raise ValueError(f"{self.source_id}: quality {self.quality} outside [0, 1]")
        if not (-1.0 <= self.leaning <= 1.0):
            raise ValueError(f"{self.source_id}: leaning {self.leaning} outside [-1, 1]")


class SourceCatalog:
    """Immutable id-keyed collection of fully scored, embedded sources."""

    def __init__(self, sources) -> None:
        self._by_id: dict[str, Source] = {}
        dims: int | None = None
        for source in sources:
            if source.source_id in self._by_id:
                raise ValueError(f"duplicate source {source.source_id!r}")
            if dims is None:
                dims = len(source.vector)
            elif len(source.vector) != dims:
                raise ValueError(
                    f"{source.source_id}: vector has {len(source.vector)} dims, expected {dims}"
                )
            self._by_id[source.source_id] = source
        if not self._by_id:
            raise ValueError("catalog must contain at least one source")
        self._ids = sorted(self._by_id)

    @classmethod
    def from_scores(cls, scores: dict[str, SourceScore], vectors: SourceVectors) -> "SourceCatalog":
        """Keep the sources that are actually usable: scored (labeled or
        imputed, both fields present) and embedded."""
        usable = []
        for source_id in sorted(scores):
            sc = scores[source_id]
            if sc.provenance not in ("labeled", "imputed"):
                continue
            if sc.quality is None or sc.leaning is None:
                continue
            vec = vectors.vectors.get(source_id)
            if vec is None:
                continue
            usable.append(Source(source_id, sc.quality, sc.leaning, vec))
        return cls(usable)

    def __len__(self) -> int:
        return len(self._ids)

    def __contains__(self, source_id: str) -> bool:
        return source_id in self._by_id

    def __getitem__(self, source_id: str) -> Source:
        return self._by_id[source_id]

    def ids(self) -> list[str]:
        return list(self._ids)

    def max_quality(self) -> float:
        return max(s.quality for s in self._by_id.values())


@dataclass
class UserProfile:
    """Trusted-source membership plus the running means derived from it."""

    user_id: str
    sources: list[str]
    limit: int
    q_u: float = 0.0
    l_u: float = 0.0
    v_u: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def copy(self) -> "UserProfile":
        return UserProfile(
            self.user_id, list(self.sources), self.limit, self.q_u, self.l_u, self.v_u.copy()
        )


def update_scores(u: UserProfile, catalog: SourceCatalog) -> None:
    """Recompute the profile means from current membership (idempotent)."""
    members = [catalog[s] for s in u.sources]
    u.q_u = sum(m.quality for m in members) / len(members)
    u.l_u = sum(m.leaning for m in members) / len(members)
    u.v_u = np.mean([m.vector for m in members], axis=0)


def profile_from_sources(
    user_id: str, trusted, catalog: SourceCatalog, limit: int
) -> UserProfile:
    sources = sorted(trusted)
    if not sources:
        raise ValueError(f"{user_id}: trusted set must be non-empty")
    if len(sources) != len(set(sources)):
        raise ValueError(f"{user_id}: duplicate trusted sources")
    if limit < 1:
        raise ValueError(f"{user_id}: limit must be >= 1")
    if len(sources) > limit:
        raise ValueError(f"{user_id}: {len(sources)} trusted sources exceed limit {limit}")
    for s in sources:
        if s not in catalog:
            raise ValueError(f"{user_id}: unknown source {s!r}")
    u = UserProfile(user_id=user_id, sources=sources, limit=limit)
    update_scores(u, catalog)
    return u


@dataclass(frozen=True)
class SimConfig:
    T: int
    L: int
    seed: int
    alpha: float = DEFAULT_ALPHA
    epsilon_converge: float = DEFAULT_EPSILON
    mode: str = "constrained"

    def __post_init__(self) -> None:
        if self.T < 1:
            raise ValueError(f"T must be >= 1, got {self.T}")
        if self.L < 1:
            raise ValueError(f"L must be >= 1, got {self.L}")
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha must lie strictly inside (0, 1), got {self.alpha}")
        if self.mode not in ("constrained", "unconstrained"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class StepRecord:
    """One iteration. ``q_u``/``l_u`` are the post-step means. At capacity
    ``accept_probability`` is the chance the offer survives the drop lottery;
    a lottery loss shows as accepted=False with dropped=None."""

    t: int
    recommended: str | None
    trust_cost: float | None
    accept_probability: float | None
    accepted: bool
    dropped: str | None
    q_u: float
    l_u: float


@dataclass
class Trajectory:
    user_id: str
    config: SimConfig
    steps: list[StepRecord]
    convergence_point: int | None
    start: UserProfile
    final: UserProfile


def trust_cost(s_prime: Source, u: UserProfile, alpha: float) -> float:
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie strictly inside (0, 1), got {alpha}")
    leaning_distance = abs(u.l_u - s_prime.leaning) / 2.0
    embedding_distance = cosine_distance(u.v_u, s_prime.vector)
    return (1.0 - alpha) * leaning_distance + alpha * embedding_distance


def select_recommendation(
    u: UserProfile, catalog: SourceCatalog, alpha: float
) -> Source | None:
    """Cheapest source strictly above the user's mean quality and not already
    trusted; ties go to the smallest source_id; None when nothing qualifies."""
    members = set(u.sources)
    best: Source | None = None
    best_cost = float("inf")
    for source_id in catalog.ids():
        source = catalog[source_id]
        if source_id in members or source.quality <= u.q_u:
            continue
        cost = trust_cost(source, u, alpha)
        if cost < best_cost:
            best, best_cost = source, cost
    return best


def _select_unconstrained(u: UserProfile, catalog: SourceCatalog) -> Source | None:
    members = set(u.sources)
    best: Source | None = None
    for source_id in catalog.ids():
        source = catalog[source_id]
        if source_id in members or source.quality <= u.q_u:
            continue
        if best is None or source.quality > best.quality:
            best = source
    return best


def drop_distribution(
    u: UserProfile, s_prime: Source, catalog: SourceCatalog, alpha: float
) -> dict[str, float]:
    """Eviction probabilities over the current members plus the offer, in
    sorted-id order, proportional to trust cost against the current profile;
    uniform when every cost is zero."""
    if len(u.sources) != u.limit:
        raise ValueError(
            f"{u.user_id}: drop lottery requires a full profile "
            f"({len(u.sources)}/{u.limit} sources)"
        )
    if s_prime.source_id in u.sources:
        raise ValueError(f"{u.user_id}: candidate {s_prime.source_id!r} already trusted")
    candidates = sorted(u.sources + [s_prime.source_id])
    costs = [trust_cost(catalog[s], u, alpha) for s in candidates]
    total = sum(costs)
    if total == 0.0:
        return {s: 1.0 / len(candidates) for s in candidates}
    return {s: c / total for s, c in zip(candidates, costs)}


def _converged(u: UserProfile, config: SimConfig) -> bool:
    return u.q_u >= 1.0 - config.epsilon_converge


def _noop_record(t: int, u: UserProfile) -> StepRecord:
    return StepRecord(
        t=t,
        recommended=None,
        trust_cost=None,
        accept_probability=None,
        accepted=False,
        dropped=None,
        q_u=u.q_u,
        l_u=u.l_u,
    )


def _step(
    u: UserProfile,
    catalog: SourceCatalog,
    config: SimConfig,
    rng: np.random.Generator,
    t: int,
    unconstrained: bool,
) -> StepRecord:
    if _converged(u, config):
        return _noop_record(t, u)
    if unconstrained:
        s_prime = _select_unconstrained(u, catalog)
    else:
        s_prime = select_recommendation(u, catalog, config.alpha)
    if s_prime is None:
        return _noop_record(t, u)

    cost = trust_cost(s_prime, u, config.alpha)
    if len(u.sources) < config.L:
        accept_probability = max(0.0, 1.0 - cost)
        accepted = rng.random() < accept_probability
        dropped = None
        if accepted:
            u.sources = sorted(u.sources + [s_prime.source_id])
    else:
        dist = drop_distribution(u, s_prime, catalog, config.alpha)
        candidates = list(dist)
        cumulative = np.cumsum([dist[s] for s in candidates])
        draw = rng.random()
        idx = min(int(np.searchsorted(cumulative, draw, side="right")), len(candidates) - 1)
        victim = candidates[idx]
        accept_probability = 1.0 - dist[s_prime.source_id]
        if victim == s_prime.source_id:
            accepted = False
            dropped = None
        else:
            accepted = True
            dropped = victim
            u.sources = sorted(s for s in u.sources + [s_prime.source_id] if s != victim)
    update_scores(u, catalog)
    return StepRecord(
        t=t,
        recommended=s_prime.source_id,
        trust_cost=cost,
        accept_probability=accept_probability,
        accepted=accepted,
        dropped=dropped,
        q_u=u.q_u,
        l_u=u.l_u,
    )


def step(
    u: UserProfile,
    catalog: SourceCatalog,
    config: SimConfig,
    rng: np.random.Generator,
    t: int = 0,
) -> StepRecord:
    """One constrained iteration, mutating ``u`` in place. No uniform is
    drawn when the user has converged or nothing is eligible."""
    return _step(u, catalog, config, rng, t, unconstrained=False)


def rng_for_user(seed: int, user_id: str) -> np.random.Generator:
    """Per-user PCG64 substream: entropy = (seed as unsigned 64-bit, first 8
    bytes of SHA-256(user_id)). Distinct users never share a stream."""
    digest = hashlib.sha256(user_id.encode("utf-8")).digest()
    entropy = [seed & _MASK64, int.from_bytes(digest[:8], "big")]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def _run(u0: UserProfile, catalog: SourceCatalog, config: SimConfig, unconstrained: bool) -> Trajectory:
    for s in u0.sources:
        if s not in catalog:
            raise ValueError(f"{u0.user_id}: unknown source {s!r}")
    if len(u0.sources) > config.L:
        raise ValueError(
            f"{u0.user_id}: {len(u0.sources)} trusted sources exceed limit {config.L}"
        )
    start = u0.copy()
    u = u0.copy()
    u.limit = config.L
    update_scores(u, catalog)
    rng = rng_for_user(config.seed, u.user_id)
    records = [
        _step(u, catalog, config, rng, t, unconstrained) for t in range(config.T)
    ]
    point = next(
        (r.t for r in records if r.q_u >= 1.0 - config.epsilon_converge), None
    )
    return Trajectory(
        user_id=u.user_id,
        config=config,
        steps=records,
        convergence_point=point,
        start=start,
        final=u,
    )


def simulate(u0: UserProfile, catalog: SourceCatalog, config: SimConfig) -> Trajectory:
    """Run the trust-constrained recommendation dynamics for ``config.T``
    steps. Pure in its inputs: ``u0`` is copied, and the outcome is a
    function of (u0, catalog, config) alone."""
    if config.mode != "constrained":
        raise ValueError(f"simulate requires mode='constrained', got {config.mode!r}")
    return _run(u0, catalog, config, unconstrained=False)


def simulate_unconstrained(
    u0: UserProfile, catalog: SourceCatalog, config: SimConfig
) -> Trajectory:
    """Baseline without the trust constraint: recommend the highest-quality
    eligible source (ties to smallest id). Acceptance and drop mechanics are
    unchanged and the trust cost of each offer is still recorded."""
    if config.mode != "unconstrained":
        raise ValueError(
            f"simulate_unconstrained requires mode='unconstrained', got {config.mode!r}"
        )
    return _run(u0, catalog, config, unconstrained=True)


def convergence_point(traj: Trajectory) -> int | None:
    """First step whose post-step mean quality clears 1 - epsilon, if any."""
    eps = traj.config.epsilon_converge
    return next((r.t for r in traj.steps if r.q_u >= 1.0 - eps), None)


def write_trajectory_csv(traj: Trajectory, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRAJECTORY_FIELDS)
        for r in traj.steps:
            writer.writerow(
                [
                    r.t,
                    r.recommended or "",
                    "" if r.trust_cost is None else repr(r.trust_cost),
                    "" if r.accept_probability is None else repr(r.accept_probability),
                    "true" if r.accepted else "false",
                    r.dropped or "",
                    repr(r.q_u),
                    repr(r.l_u),
                ]
            )


def _profile_summary(u: UserProfile) -> dict:
    return {"sources": list(u.sources), "q_u": u.q_u, "l_u": u.l_u}


def write_summary_json(trajectories: list[Trajectory], path) -> None:
    """One entry per user: start/end profile, convergence point, and the
    exact config (seed included) that produced the run."""
    payload = []
    for traj in trajectories:
        cfg = traj.config
        payload.append(
            {
                "user_id": traj.user_id,
                "config": {
                    "T": cfg.T,
                    "L": cfg.L,
                    "alpha": cfg.alpha,
                    "seed": cfg.seed,
                    "epsilon_converge": cfg.epsilon_converge,
                    "mode": cfg.mode,
                },
                "start": _profile_summary(traj.start),
                "end": _profile_summary(traj.final),
                "convergence_point": traj.convergence_point,
                "accepted_steps": sum(1 for r in traj.steps if r.accepted),
            }
        )
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


@dataclass(frozen=True)
class Persona:
    user_id: str
    sources: tuple[str, ...]
    L: int


def load_personas(path) -> list[Persona]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list):
        raise ValueError(f"{path}: expected a JSON list of personas")
    personas = []
    seen = set()
    for i, entry in enumerate(data):
        try:
            user_id = entry["user_id"]
            sources = tuple(entry["sources"])
            limit = int(entry["L"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"{path}: persona #{i}: missing field ({exc})") from exc
        if not sources:
            raise ValueError(f"{path}: persona {user_id!r} has no sources")
        if user_id in seen:
            raise ValueError(f"{path}: duplicate persona {user_id!r}")
        seen.add(user_id)
        personas.append(Persona(user_id=user_id, sources=sources, L=limit))
    return personas


def write_personas(personas: list[Persona], path) -> None:
    payload = [
        {"user_id": p.user_id, "sources": list(p.sources), "L": p.L} for p in personas
    ]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
