"""
Generator specifications and their seed layouts.

Seed layout (`layout=v1`): the base seed first, then levels r, r-1, ..., 1, with D_i before T_i
inside a level. Every slice is disjoint from every other one.

Variants:

    exact  base = all ones (no seed), D_i = 2k-wise, T_i = k-wise
    star   base = (320k)-wise, D_i = delta-biased, T_i = gamma-almost k-wise
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

from config import config
from core.bitvector import BitVector
from core.errors import ParameterError, SeedError, ValidationError
from generator.params import derive_params_exact, derive_params_star
from primitives.descriptor import (
    DistributionDescriptor,
    almost_kwise,
    kwise,
    point_mass,
    small_bias,
)

logger = logging.getLogger(__name__)

settings = config('robpgen:generator')

BASE_INDEPENDENCE_FACTOR = settings.getint("BASE_INDEPENDENCE_FACTOR", fallback=320)

LAYOUT_VERSION = "v1"


class Variant(str, Enum):
    EXACT = "exact"
    STAR = "star"


class Role(str, Enum):
    BASE = "base"
    D = "D"
    T = "T"


@dataclass(frozen=True)
class LayoutEntry:
    level: int
    role: Role
    offset: int
    length: int


@dataclass(frozen=True)
class GeneratorSpec:
    """
    A fully parameterized generator.

    Attributes:
        variant (Variant): exact or star.
        n (int): Output length.
        w (int): Width of the programs it targets.
        k (int): Independence parameter.
        r (int): Number of recursion levels.
        delta (float | None): Bias of D_i (star).
        gamma (float | None): Distance of T_i from k-wise independence (star).
        epsilon (float | None): Target error the parameters were derived for (star, derived mode).
        mode (str): "derived" when (k, r, delta, gamma) follow the derivation, else "override".
        base (DistributionDescriptor): Distribution of G_0.
        d (tuple[DistributionDescriptor, ...]): D_1 .. D_r.
        t (tuple[DistributionDescriptor, ...]): T_1 .. T_r.
        layout (tuple[LayoutEntry, ...]): Seed slices in seed order.
    """

    variant: Variant
    n: int
    w: int
    k: int
    r: int
    delta: float | None
    gamma: float | None
    epsilon: float | None
    mode: str
    base: DistributionDescriptor
    d: tuple[DistributionDescriptor, ...]
    t: tuple[DistributionDescriptor, ...]
    layout: tuple[LayoutEntry, ...]

    @property
    def seed_bits(self) -> int:
        return sum(entry.length for entry in self.layout)

    def slice_of(self, level: int, role: Role) -> LayoutEntry:
        for entry in self.layout:
            if entry.level == level and entry.role == role:
                return entry
        raise ValidationError(f"no seed slice for level {level} role {role.value}")

    def level_descriptors(self, level: int) -> tuple[DistributionDescriptor, DistributionDescriptor]:
        """(D_level, T_level), 1-indexed."""
        return self.d[level - 1], self.t[level - 1]

    def to_text(self) -> str:
        head = f"gen variant={self.variant.value} n={self.n} w={self.w} k={self.k} r={self.r}"
        if self.variant == Variant.STAR:
            head += f" delta={self.delta!r} gamma={self.gamma!r}"
        return f"{head} layout={LAYOUT_VERSION}"

    @classmethod
    def from_text(cls, text: str) -> GeneratorSpec:
        parts = text.split()
        if not parts or parts[0] != "gen":
            raise ValidationError(f"generator text must start with 'gen': {text!r}")
        try:
            fields = dict(p.split("=", 1) for p in parts[1:])
            variant = Variant(fields["variant"])
            n, w, k, r = (int(fields[key]) for key in ("n", "w", "k", "r"))
        except (KeyError, ValueError) as e:
            raise ValidationError(f"malformed generator text {text!r}: {e}") from e
        if fields.get("layout", LAYOUT_VERSION) != LAYOUT_VERSION:
            raise ValidationError(f"unsupported seed layout {fields['layout']!r}")
        if variant == Variant.EXACT:
            return exact_spec(n, w, k=k, r=r)
        return star_spec(n, w, k=k, r=r, delta=float(fields["delta"]), gamma=float(fields["gamma"]))

    def __str__(self) -> str:
        return self.to_text()


def _layout(base: DistributionDescriptor, d: list, t: list) -> tuple[LayoutEntry, ...]:
    entries = [LayoutEntry(0, Role.BASE, 0, base.seed_bits)]
    offset = base.seed_bits
    for level in range(len(d), 0, -1):
        for role, desc in ((Role.D, d[level - 1]), (Role.T, t[level - 1])):
            entries.append(LayoutEntry(level, role, offset, desc.seed_bits))
            offset += desc.seed_bits
    return tuple(entries)


def exact_spec(n: int, w: int, k: int | None = None, r: int | None = None) -> GeneratorSpec:
    """Exact-independence generator; k and r default to the derived parameters."""
    if n < 1:
        raise ParameterError(f"output length must be positive, got {n}")
    if k is None or r is None:
        derived_k, derived_r = derive_params_exact(max(n, 2), w)
        k = derived_k if k is None else k
        r = derived_r if r is None else r
    if k < 1 or r < 0:
        raise ParameterError(f"need k >= 1 and r >= 0, got k={k}, r={r}")
    mode = "derived" if n >= 2 and (k, r) == derive_params_exact(n, w) else "override"

    base = point_mass(BitVector.ones(n))
    d = [kwise(n, 2 * k) for _ in range(r)]
    t = [kwise(n, k) for _ in range(r)]
    return GeneratorSpec(Variant.EXACT, n, w, k, r, None, None, None, mode,
                         base, tuple(d), tuple(t), _layout(base, d, t))


def star_spec(n: int, w: int, epsilon: float | None = None, k: int | None = None, r: int | None = None,
              delta: float | None = None, gamma: float | None = None,
              base_factor: int | None = None) -> GeneratorSpec:
    """
    Small-bias plus almost-independence generator.

    Parameters not given explicitly are derived from epsilon; with every parameter given, epsilon
    may be omitted.
    """
    factor = BASE_INDEPENDENCE_FACTOR if base_factor is None else base_factor
    derived = None
    if None in (k, r, delta, gamma):
        if epsilon is None:
            raise ParameterError("star generator needs epsilon or explicit k, r, delta and gamma")
        derived = derive_params_star(n, w, epsilon)
        k = derived.k if k is None else k
        r = derived.r if r is None else r
        delta = derived.delta if delta is None else delta
        gamma = derived.gamma if gamma is None else gamma
    if k < 1 or r < 0:
        raise ParameterError(f"need k >= 1 and r >= 0, got k={k}, r={r}")
    mode = "derived" if derived is not None and (k, r, gamma, delta) == derived[:4] else "override"

    base = kwise(n, factor * k)
    d = [small_bias(n, delta) for _ in range(r)]
    t = [almost_kwise(n, k, gamma) for _ in range(r)]
    return GeneratorSpec(Variant.STAR, n, w, k, r, delta, gamma, epsilon, mode,
                         base, tuple(d), tuple(t), _layout(base, d, t))


# ----------------------------------------------------------------------
# Seeds
# ----------------------------------------------------------------------
def seed_length(spec: GeneratorSpec) -> int:
    return spec.seed_bits


def check_seed(spec: GeneratorSpec, seed: BitVector) -> None:
    if seed.length != spec.seed_bits:
        raise SeedError(f"{spec} expects a {spec.seed_bits}-bit seed, got {seed.length} bits")


def random_seed(spec: GeneratorSpec, rng) -> BitVector:
    """A uniform seed drawn from a numpy Generator."""
    return BitVector(rng.integers(0, 2, size=spec.seed_bits).tolist())


def seed_to_hex(seed: BitVector) -> str:
    """Hex of the seed word, zero-padded to ceil(length / 4) digits."""
    return format(seed.word, f"0{max(1, -(-seed.length // 4))}x")


def seed_from_hex(spec: GeneratorSpec, text: str) -> BitVector:
    try:
        word = int(text, 16)
    except ValueError as e:
        raise SeedError(f"not a hex seed: {text!r}") from e
    return BitVector.from_int(word, spec.seed_bits)
