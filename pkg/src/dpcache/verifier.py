"""Exhaustive certification of decodability and demand privacy.

A scheme is any object with ``params``, ``key_space``, ``name`` and the
three methods ``place(library, keys)``, ``deliver(library, demands, keys)``
and ``decode(k, cache, broadcast)``. Keys and demands are uniform on
``[key_space]^K`` and ``[N]^K``; every (keys, demands) pair is enumerated.

Privacy is certified per fixed library w: user k's view is (its cache, the
broadcast, its own demand), and within every group of equal views the
demands of the other users must be exactly uniform. All of this is integer
counting; no tolerance is involved.
"""

from __future__ import annotations

import json
import math
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator

from .model import BroadcastMessage, FileLibrary, SchemeParams, default_budget, enumerate_worlds, sample_library
from .private import PrivateScheme

DEFAULT_SAMPLED_WORLDS = 64
MAX_WITNESSES = 50


@dataclass(frozen=True)
class WorldPolicy:
    mode: str = "exhaustive"  # exhaustive | fixed | sampled
    count: int = DEFAULT_SAMPLED_WORLDS
    seed: int = 0
    budget: int | None = None

    def __post_init__(self):
        if self.mode not in ("exhaustive", "fixed", "sampled"):
            raise ValueError(f"unknown world policy {self.mode!r}")
        if self.count < 1:
            raise ValueError("sampled world count must be positive")

    @classmethod
    def parse(cls, text: str, seed: int = 0, budget: int | None = None) -> "WorldPolicy":
        """'exhaustive', 'fixed', 'sampled' or 'sampled:<count>'."""
        mode, _, count = text.partition(":")
        if count and mode != "sampled":
            raise ValueError(f"only the sampled policy takes a count: {text!r}")
        return cls(mode, int(count) if count else DEFAULT_SAMPLED_WORLDS, seed, budget)

    def worlds(self, params: SchemeParams) -> Iterator[tuple[int, FileLibrary]]:
        """(label, library) pairs; the label is the world index or its seed."""
        if self.mode == "exhaustive":
            yield from enumerate(enumerate_worlds(params, self.budget))
        elif self.mode == "fixed":
            yield self.seed, sample_library(params, self.seed)
        else:
            rng = random.Random(self.seed)
            for _ in range(self.count):
                s = rng.getrandbits(64)
                yield s, sample_library(params, s)


@dataclass(frozen=True)
class DecodeFailure:
    world: int
    keys: tuple[int, ...]
    demands: tuple[int, ...]
    user: int
    reason: str


@dataclass(frozen=True)
class PrivacyViolation:
    world: int | None
    user: int
    own_key: int
    own_demand: int
    header: tuple[int, ...]
    distribution: dict
    expected: Fraction


@dataclass(frozen=True)
class MutualInformation:
    user: int
    exact_zero: bool
    bits: float


@dataclass
class VerificationReport:
    scheme: str
    mode: str
    worlds: int = 0
    decode_checks: int = 0
    decode_failure_count: int = 0
    decode_failures: list = field(default_factory=list)
    privacy_groups: int = 0
    privacy_violation_count: int = 0
    privacy_violations: list = field(default_factory=list)
    mutual_information: list | None = None
    rates: set = field(default_factory=set)

    @property
    def decodable(self) -> bool:
        return self.decode_failure_count == 0

    @property
    def private(self) -> bool:
        mi_ok = self.mutual_information is None or all(m.exact_zero for m in self.mutual_information)
        return self.privacy_violation_count == 0 and mi_ok

    @property
    def passed(self) -> bool:
        return self.decodable and self.private

    @property
    def rate(self) -> Fraction | None:
        return next(iter(self.rates)) if len(self.rates) == 1 else None

    def add_decode_failure(self, failure: DecodeFailure):
        self.decode_failure_count += 1
        if len(self.decode_failures) < MAX_WITNESSES:
            self.decode_failures.append(failure)

    def add_privacy_violation(self, violation: PrivacyViolation):
        self.privacy_violation_count += 1
        if len(self.privacy_violations) < MAX_WITNESSES:
            self.privacy_violations.append(violation)

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        out = VerificationReport(self.scheme, self.mode)
        for r in (self, other):
            out.worlds += r.worlds
            out.decode_checks += r.decode_checks
            out.privacy_groups += r.privacy_groups
            out.rates |= r.rates
            for w in r.decode_failures:
                out.add_decode_failure(w)
            for v in r.privacy_violations:
                out.add_privacy_violation(v)
        out.decode_failure_count = self.decode_failure_count + other.decode_failure_count
        out.privacy_violation_count = self.privacy_violation_count + other.privacy_violation_count
        if self.mutual_information is not None or other.mutual_information is not None:
            out.mutual_information = (self.mutual_information or []) + (other.mutual_information or [])
        return out

    def render_text(self) -> str:
        lines = [f"scheme: {self.scheme}", f"worlds: {self.mode} ({self.worlds})"]
        if self.rates:
            lines.append("rate: " + ", ".join(str(r) for r in sorted(self.rates)))
        lines.append(f"decodability: {'PASS' if self.decodable else 'FAIL'} "
                     f"({self.decode_checks} checks, {self.decode_failure_count} failures)")
        lines.append(f"privacy: {'PASS' if self.privacy_violation_count == 0 else 'FAIL'} "
                     f"({self.privacy_groups} view groups, {self.privacy_violation_count} non-uniform)")
        for m in self.mutual_information or ():
            verdict = "exactly 0" if m.exact_zero else "nonzero"
            lines.append(f"mutual information user {m.user}: {verdict}, {m.bits:.12f} bits")
        lines.append(f"result: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)

    def render_lines(self) -> list[str]:
        """One JSON object per witness."""
        out = []
        for w in self.decode_failures:
            out.append(json.dumps({"kind": "decode", "world": w.world, "keys": w.keys,
                                   "demands": w.demands, "user": w.user, "reason": w.reason}))
        for v in self.privacy_violations:
            out.append(json.dumps({
                "kind": "privacy", "world": v.world, "user": v.user, "own_key": v.own_key,
                "own_demand": v.own_demand, "header": v.header,
                "distribution": {",".join(map(str, x)): str(p) for x, p in v.distribution.items()},
                "expected": str(v.expected)}))
        return out


def _episodes(scheme, library: FileLibrary):
    """Yield (keys, demands, caches, broadcast) for every key/demand pair."""
    p = scheme.params
    key_vectors = list(product(range(1, scheme.key_space + 1), repeat=p.n_users))
    demand_vectors = list(product(range(1, p.n_files + 1), repeat=p.n_users))
    for keys in key_vectors:
        caches = scheme.place(library, keys)
        for demands in demand_vectors:
            yield keys, demands, caches, scheme.deliver(library, demands, keys)


def _view(k: int, caches, broadcast: BroadcastMessage, demands) -> tuple:
    return (caches[k - 1].digest(), broadcast.digest(), demands[k - 1])


def _others(demands, k: int) -> tuple[int, ...]:
    return demands[:k - 1] + demands[k:]


def mi_from_counts(joint: Counter) -> tuple[bool, float]:
    """I(X; V) for equiprobable outcomes counted as joint[(view, x)].

    Exact-zero verdict: c(v,x) * T == c(v) * c(x) for every cell.
    """
    total = sum(joint.values())
    cv: Counter = Counter()
    cx: Counter = Counter()
    for (v, x), c in joint.items():
        cv[v] += c
        cx[x] += c
    exact_zero = all(joint.get((v, x), 0) * total == cv[v] * cx[x] for v in cv for x in cx)
    bits = 0.0
    for (v, x), c in joint.items():
        bits += c / total * math.log2(c * total / (cv[v] * cx[x]))
    if exact_zero:
        bits = 0.0
    return exact_zero, round(bits, 12)


def _scan(scheme, policy: WorldPolicy, decode: bool, privacy: bool) -> VerificationReport:
    p = scheme.params
    report = VerificationReport(scheme.name, policy.mode)
    expected = Fraction(1, p.n_files ** (p.n_users - 1))
    n_others = p.n_files ** (p.n_users - 1)
    for label, library in policy.worlds(p):
        report.worlds += 1
        groups = [defaultdict(Counter) for _ in range(p.n_users)]
        for keys, demands, caches, broadcast in _episodes(scheme, library):
            report.rates.add(Fraction(broadcast.payload_bits(p.subfile_bits), p.file_bits))
            for k in range(1, p.n_users + 1):
                if decode:
                    report.decode_checks += 1
                    try:
                        out = scheme.decode(k, caches[k - 1], broadcast)
                    except Exception as exc:
                        report.add_decode_failure(DecodeFailure(label, keys, demands, k, str(exc)))
                    else:
                        if out != library.file(demands[k - 1]):
                            report.add_decode_failure(
                                DecodeFailure(label, keys, demands, k, "decoded file differs"))
                if privacy:
                    groups[k - 1][_view(k, caches, broadcast, demands)][_others(demands, k)] += 1
        if not privacy:
            continue
        for k, by_view in enumerate(groups, start=1):
            joint = Counter()
            world_ok = True
            for view, counts in by_view.items():
                report.privacy_groups += 1
                for x, c in counts.items():
                    joint[view, x] = c
                values = set(counts.values())
                if len(counts) == n_others and len(values) == 1:
                    continue
                world_ok = False
                size = sum(counts.values())
                (cache_key, _), (header, _), own_demand = view
                report.add_privacy_violation(PrivacyViolation(
                    label, k, cache_key, own_demand, header,
                    {x: Fraction(c, size) for x, c in sorted(counts.items())}, expected))
            # conditional uniformity and zero conditional MI must agree
            zero, _ = mi_from_counts(joint)
            assert zero == world_ok, f"uniformity and MI verdicts disagree in world {label}"
    return report


def check_decodability(scheme, policy: WorldPolicy) -> VerificationReport:
    return _scan(scheme, policy, decode=True, privacy=False)


def check_privacy_uniform(scheme, policy: WorldPolicy) -> VerificationReport:
    return _scan(scheme, policy, decode=False, privacy=True)


def mutual_information(scheme, budget: int | None = None) -> list[MutualInformation]:
    """I(other demands; cache, broadcast, own demand) per user, worlds marginalized.

    Enumerates every library, key vector and demand vector, so the library
    size must fit the enumeration budget.
    """
    p = scheme.params
    joints = [Counter() for _ in range(p.n_users)]
    for library in enumerate_worlds(p, default_budget() if budget is None else budget):
        for keys, demands, caches, broadcast in _episodes(scheme, library):
            for k in range(1, p.n_users + 1):
                joints[k - 1][_view(k, caches, broadcast, demands), _others(demands, k)] += 1
    out = []
    for k, joint in enumerate(joints, start=1):
        zero, bits = mi_from_counts(joint)
        out.append(MutualInformation(k, zero, bits))
    return out


def verify(scheme, policy: WorldPolicy, with_mi: bool = True) -> VerificationReport:
    """Decodability and per-world privacy in one pass, plus the full-joint MI
    whenever the whole library space fits the budget."""
    report = _scan(scheme, policy, decode=True, privacy=True)
    budget = default_budget() if policy.budget is None else policy.budget
    if with_mi and scheme.params.library_bits <= budget:
        report.mutual_information = mutual_information(scheme, budget)
    return report


# negative controls and mutations


class CleartextDemandScheme(PrivateScheme):
    """Private construction that also sends the raw demand vector in the header."""

    name = "cleartext-demand control"

    def deliver(self, library, demands, keys):
        msg = super().deliver(library, demands, keys)
        return BroadcastMessage(msg.header + tuple(demands), msg.payload, msg.labels)


class DroppedBlockScheme:
    """Wraps a scheme and silently drops payload block ``index``."""

    def __init__(self, base, index: int):
        self.base = base
        self.index = index
        self.params = base.params
        self.key_space = base.key_space
        self.name = f"{base.name} minus block {index}"

    def place(self, library, keys):
        return self.base.place(library, keys)

    def deliver(self, library, demands, keys):
        msg = self.base.deliver(library, demands, keys)
        j = self.index
        return BroadcastMessage(msg.header, msg.payload[:j] + msg.payload[j + 1:],
                                msg.labels[:j] + msg.labels[j + 1:])

    def decode(self, k, cache, broadcast):
        return self.base.decode(k, cache, broadcast)


class FlippedBitScheme(DroppedBlockScheme):
    """Wraps a scheme and flips the low bit of payload block ``index``."""

    def __init__(self, base, index: int):
        super().__init__(base, index)
        self.name = f"{base.name} with block {index} corrupted"

    def deliver(self, library, demands, keys):
        msg = self.base.deliver(library, demands, keys)
        payload = list(msg.payload)
        payload[self.index] ^= 1
        return BroadcastMessage(msg.header, tuple(payload), msg.labels)


def run_fixture(budget: int | None = None) -> VerificationReport:
    from .fixture import FixtureScheme

    report = verify(FixtureScheme(), WorldPolicy("exhaustive", budget=budget))
    assert report.rates == {Fraction(4, 6)}, f"fixture rate {report.rates} != 2/3"
    return report
