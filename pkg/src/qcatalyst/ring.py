"""Exact arithmetic over towers of quadratic extensions of the dyadic rationals.

The base ring is D = Z[1/2], the dyadic rationals.  A tower adjoins
generators a_1, ..., a_k, each satisfying a_j^2 in D[a_1, ..., a_{j-1}],
so every element has a unique dense representation as a D-linear
combination of the 2^k square-free monomials prod_{j in S} a_j.

All simulator amplitudes, gadget weights and H-box labels in this package
are :class:`RingElement` values; floating point only ever appears in the
non-authoritative :func:`RingElement.embed_float` diagnostic.
"""

from __future__ import annotations

import cmath
import re
from typing import Iterable, Mapping, Union


class RingError(Exception):
    """Base error for ring arithmetic."""


class TowerMismatchError(RingError):
    """Operands belong to different towers."""


class DependentGeneratorError(RingError):
    """A proposed generator already lies (numerically) in the lower ring."""


class UnrepresentablePhaseError(RingError):
    """The tower does not contain the requested root of unity."""


class Dyadic:
    """A dyadic rational num / 2**exp in canonical form (num odd or zero)."""

    __slots__ = ("num", "exp")

    def __init__(self, num: int, exp: int = 0):
        if exp < 0:
            num <<= -exp
            exp = 0
        if num == 0:
            exp = 0
        else:
            while num % 2 == 0 and exp > 0:
                num //= 2
                exp -= 1
        self.num = num
        self.exp = exp

    @staticmethod
    def from_str(text: str) -> "Dyadic":
        """Parse ``3``, ``-3/8`` etc.; the denominator must be a power of two."""
        text = text.strip()
        if "/" in text:
            n, d = text.split("/")
            den = int(d)
            if den <= 0 or den & (den - 1):
                raise RingError(f"denominator {den} is not a power of two")
            return Dyadic(int(n), den.bit_length() - 1)
        return Dyadic(int(text))

    def __add__(self, other: "Dyadic") -> "Dyadic":
        e = max(self.exp, other.exp)
        return Dyadic((self.num << (e - self.exp)) + (other.num << (e - other.exp)), e)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        return self + (-other)

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.num, self.exp)

    def __mul__(self, other: "Dyadic") -> "Dyadic":
        return Dyadic(self.num * other.num, self.exp + other.exp)

    def half(self, k: int = 1) -> "Dyadic":
        return Dyadic(self.num, self.exp + k)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Dyadic)
            and self.num == other.num
            and self.exp == other.exp
        )

    def __hash__(self) -> int:
        return hash((self.num, self.exp))

    def __bool__(self) -> bool:
        return self.num != 0

    def __float__(self) -> float:
        return self.num / (1 << self.exp)

    def sign(self) -> int:
        return (self.num > 0) - (self.num < 0)

    def __repr__(self) -> str:
        return f"Dyadic({self.num}, {self.exp})"

    def __str__(self) -> str:
        if self.exp == 0:
            return str(self.num)
        return f"{self.num}/{1 << self.exp}"


D_ZERO = Dyadic(0)
D_ONE = Dyadic(1)

DyadicLike = Union[Dyadic, int]


def _as_dyadic(v: DyadicLike) -> Dyadic:
    if isinstance(v, Dyadic):
        return v
    if isinstance(v, int):
        return Dyadic(v)
    raise TypeError(f"cannot coerce {v!r} to a dyadic rational")


class TowerSpec:
    """An ordered tower of quadratic generators over Z[1/2].

    Each generator j is given by its name, the coefficients of its square
    (supported on monomials of generators 0..j-1 only), the coefficients of
    its complex conjugate (over the full tower), and a float embedding used
    for diagnostics and sign reads.
    """

    def __init__(
        self,
        generators: Iterable[tuple[str, Mapping[int, DyadicLike], Mapping[int, DyadicLike], complex]],
        allow_dependent: bool = False,
    ):
        gens = list(generators)
        self.names: tuple[str, ...] = tuple(g[0] for g in gens)
        if len(set(self.names)) != len(self.names):
            raise RingError("duplicate generator names")
        self.k = len(gens)
        self.dim = 1 << self.k
        self._squares: list[dict[int, Dyadic]] = []
        self._conjs: list[dict[int, Dyadic]] = []
        self.float_embeddings: tuple[complex, ...] = tuple(complex(g[3]) for g in gens)
        for j, (_, sq, cj, _) in enumerate(gens):
            sq_c = {m: _as_dyadic(c) for m, c in sq.items() if _as_dyadic(c)}
            if any(m >> j for m in sq_c):
                raise RingError(
                    f"square of generator {j} uses generators at or above index {j}"
                )
            cj_c = {m: _as_dyadic(c) for m, c in cj.items() if _as_dyadic(c)}
            if any(m >> self.k for m in cj_c):
                raise RingError(f"conjugate of generator {j} is out of range")
            self._squares.append(sq_c)
            self._conjs.append(cj_c)
        self._mul_cache: dict[tuple[int, int], dict[int, Dyadic]] = {}
        self._conj_mono_cache: dict[int, dict[int, Dyadic]] = {}
        self._check_embedding_consistency()
        if not allow_dependent:
            self._reject_dependent_generators()

    # -- construction checks ------------------------------------------------

    def _check_embedding_consistency(self) -> None:
        for j in range(self.k):
            want = self.float_embeddings[j] ** 2
            got = sum(
                float(c) * self._monomial_float(m) for m, c in self._squares[j].items()
            )
            if abs(want - got) > 1e-12:
                raise RingError(
                    f"float embedding of generator {self.names[j]} squared "
                    f"({want}) disagrees with its square relation ({got})"
                )

    def _reject_dependent_generators(self) -> None:
        # Exact membership testing is out of scope; a least-squares fit over
        # the lower basis with near-dyadic coefficients is treated as
        # evidence of dependence.
        import numpy as np

        for j in range(self.k):
            basis = [self._monomial_float(m) for m in range(1 << j)]
            target = self.float_embeddings[j]
            a = np.array([[z.real for z in basis], [z.imag for z in basis]])
            b = np.array([target.real, target.imag])
            coeffs, *_ = np.linalg.lstsq(a, b, rcond=None)
            resid = a @ coeffs - b
            if np.linalg.norm(resid) > 1e-9:
                continue
            snapped = [round(c * 4096) / 4096 for c in coeffs]
            if all(abs(c - s) < 1e-9 for c, s in zip(coeffs, snapped)):
                raise DependentGeneratorError(
                    f"generator {self.names[j]} appears to lie in the lower ring "
                    "(pass allow_dependent=True to override)"
                )

    # -- monomial arithmetic ------------------------------------------------

    def _monomial_float(self, mask: int) -> complex:
        z = 1 + 0j
        for j in range(self.k):
            if mask >> j & 1:
                z *= self.float_embeddings[j]
        return z

    def _basis_mul(self, m1: int, m2: int) -> dict[int, Dyadic]:
        """Product of two basis monomials, reduced by the square relations."""
        if m1 > m2:
            m1, m2 = m2, m1
        key = (m1, m2)
        cached = self._mul_cache.get(key)
        if cached is not None:
            return cached
        common = m1 & m2
        if common == 0:
            out = {m1 | m2: D_ONE}
        else:
            j = (common & -common).bit_length() - 1
            bit = 1 << j
            partial = self._basis_mul(m1 & ~bit, m2 & ~bit)
            out = {}
            for ms, cs in self._squares[j].items():
                for mp, cp in partial.items():
                    for mr, cr in self._basis_mul(mp, ms).items():
                        c = cp * cs * cr
                        acc = out.get(mr)
                        out[mr] = c if acc is None else acc + c
            out = {m: c for m, c in out.items() if c}
        self._mul_cache[key] = out
        return out

    def _conj_monomial(self, mask: int) -> dict[int, Dyadic]:
        cached = self._conj_mono_cache.get(mask)
        if cached is not None:
            return cached
        out: dict[int, Dyadic] = {0: D_ONE}
        for j in range(self.k):
            if not (mask >> j & 1):
                continue
            nxt: dict[int, Dyadic] = {}
            for m1, c1 in out.items():
                for m2, c2 in self._conjs[j].items():
                    for mr, cr in self._basis_mul(m1, m2).items():
                        c = c1 * c2 * cr
                        acc = nxt.get(mr)
                        nxt[mr] = c if acc is None else acc + c
            out = {m: c for m, c in nxt.items() if c}
        self._conj_mono_cache[mask] = out
        return out

    # -- element constructors -----------------------------------------------

    def zero(self) -> "RingElement":
        return RingElement(self, (D_ZERO,) * self.dim)

    def one(self) -> "RingElement":
        return self.from_dyadic(D_ONE)

    def from_dyadic(self, v: DyadicLike) -> "RingElement":
        coeffs = [D_ZERO] * self.dim
        coeffs[0] = _as_dyadic(v)
        return RingElement(self, tuple(coeffs))

    def from_coeffs(self, coeffs: Mapping[int, DyadicLike]) -> "RingElement":
        dense = [D_ZERO] * self.dim
        for m, c in coeffs.items():
            if not 0 <= m < self.dim:
                raise RingError(f"monomial mask {m} out of range")
            dense[m] = _as_dyadic(c)
        return RingElement(self, tuple(dense))

    def generator(self, name: str) -> "RingElement":
        try:
            j = self.names.index(name)
        except ValueError:
            raise RingError(f"no generator named {name!r}") from None
        return self.from_coeffs({1 << j: D_ONE})

    def imag_unit(self) -> "RingElement":
        """The element i, if some generator embeds to it."""
        for j, z in enumerate(self.float_embeddings):
            if abs(z - 1j) < 1e-12 and self._squares[j] == {0: Dyadic(-1)}:
                return self.from_coeffs({1 << j: D_ONE})
        raise RingError("tower does not contain i")

    def root_of_unity(self, k: int) -> "RingElement":
        """The primitive 2^k-th root of unity e^{2 pi i / 2^k}, if present."""
        if k == 0:
            return self.one()
        if k == 1:
            return self.from_dyadic(Dyadic(-1))
        target = cmath.exp(2j * cmath.pi / (1 << k))
        for j, z in enumerate(self.float_embeddings):
            if abs(z - target) < 1e-12:
                return self.from_coeffs({1 << j: D_ONE})
        raise UnrepresentablePhaseError(
            f"tower has no primitive 2^{k}-th root of unity"
        )

    def sqrt2_over_2(self) -> "RingElement":
        """1/sqrt(2) = (w + conj(w)) / 2 where w = e^{i pi / 4}."""
        w = self.root_of_unity(3)
        return (w + w.conj()).half()

    # -- identity -----------------------------------------------------------

    def _signature(self):
        return (
            self.names,
            tuple(tuple(sorted(s.items())) for s in self._squares),
            tuple(tuple(sorted(s.items())) for s in self._conjs),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TowerSpec) and (
            self is other or self._signature() == other._signature()
        )

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"TowerSpec({', '.join(self.names)})"


class RingElement:
    """An element of a quadratic tower, as a dense vector of dyadic coefficients.

    The representation is canonical: two elements over equal towers are equal
    iff all 2^k coefficients are equal.  Immutable and safe to share.
    """

    __slots__ = ("tower", "coeffs")

    def __init__(self, tower: TowerSpec, coeffs: tuple[Dyadic, ...]):
        if len(coeffs) != tower.dim:
            raise RingError("coefficient vector has wrong length")
        self.tower = tower
        self.coeffs = coeffs

    def _check_tower(self, other: "RingElement") -> None:
        if self.tower is not other.tower and self.tower != other.tower:
            raise TowerMismatchError(
                f"operands over different towers: {self.tower} vs {other.tower}"
            )

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check_tower(other)
        return RingElement(
            self.tower, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "RingElement") -> "RingElement":
        self._check_tower(other)
        return RingElement(
            self.tower, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self) -> "RingElement":
        return RingElement(self.tower, tuple(-a for a in self.coeffs))

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._check_tower(other)
        t = self.tower
        acc = [D_ZERO] * t.dim
        for m1, c1 in enumerate(self.coeffs):
            if not c1:
                continue
            for m2, c2 in enumerate(other.coeffs):
                if not c2:
                    continue
                c12 = c1 * c2
                for mr, cr in t._basis_mul(m1, m2).items():
                    acc[mr] = acc[mr] + c12 * cr
        return RingElement(t, tuple(acc))

    def __pow__(self, n: int) -> "RingElement":
        if n < 0:
            raise RingError("negative powers are not defined in a ring")
        out = self.tower.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, v: DyadicLike) -> "RingElement":
        d = _as_dyadic(v)
        return RingElement(self.tower, tuple(c * d for c in self.coeffs))

    def half(self, k: int = 1) -> "RingElement":
        """Exact division by 2**k, the only general division available."""
        return RingElement(self.tower, tuple(c.half(k) for c in self.coeffs))

    def conj(self) -> "RingElement":
        """Complex conjugation via the tower's generator-conjugate map."""
        t = self.tower
        acc = [D_ZERO] * t.dim
        for m, c in enumerate(self.coeffs):
            if not c:
                continue
            for mr, cr in t._conj_monomial(m).items():
                acc[mr] = acc[mr] + c * cr
        return RingElement(t, tuple(acc))

    def real_part(self) -> "RingElement":
        return (self + self.conj()).half()

    def imag_part(self) -> "RingElement":
        c = self.conj()
        if c == self:
            return self.tower.zero()
        i = self.tower.imag_unit()
        # (x - conj(x)) / (2i) = -(i/2) (x - conj(x))
        return ((self - c) * i).half().__neg__()

    def is_real(self) -> bool:
        return self.conj() == self

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def embed_float(self) -> complex:
        """Non-authoritative complex embedding for diagnostics and reporting."""
        return sum(
            float(c) * self.tower._monomial_float(m)
            for m, c in enumerate(self.coeffs)
            if c
        ) + 0j

    def float_sign(self) -> int:
        """Sign of a real element, read off the float embedding."""
        z = self.embed_float()
        if abs(z.imag) > 1e-9:
            raise RingError(f"{self} is not real")
        if abs(z.real) < 1e-12:
            return 0
        return 1 if z.real > 0 else -1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        self._check_tower(other)
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"<{format_ring(self)}>"

    def __str__(self) -> str:
        return format_ring(self)


# -- textual form -----------------------------------------------------------
#
# element   := term (('+' | '-') term)*
# term      := coeff | monomial | coeff '*' monomial
# coeff     := INT | INT '/' POW2
# monomial  := NAME ('*' NAME)*
#
# The middle dot is accepted as a synonym for '*'.


_TOKEN = re.compile(r"\s*([+-]|\d+/\d+|\d+|[A-Za-z_][A-Za-z_0-9]*|[*·])")


def format_ring(x: RingElement) -> str:
    parts = []
    for m, c in enumerate(x.coeffs):
        if not c:
            continue
        names = [x.tower.names[j] for j in range(x.tower.k) if m >> j & 1]
        mag = Dyadic(abs(c.num), c.exp)
        if names and mag == D_ONE:
            body = "*".join(names)
        elif names:
            body = str(mag) + "*" + "*".join(names)
        else:
            body = str(mag)
        if not parts:
            parts.append(body if c.num > 0 else "-" + body)
        else:
            parts.append(("+ " if c.num > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"


def parse_ring(text: str, tower: TowerSpec) -> RingElement:
    """Parse the textual ring form, e.g. ``1/2 + 3*w - 1/4*i*w``."""
    tokens = []
    pos = 0
    stripped = text.strip()
    while pos < len(stripped):
        m = _TOKEN.match(stripped, pos)
        if not m:
            raise RingError(f"bad ring syntax at {stripped[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    if not tokens:
        raise RingError("empty ring expression")

    coeffs: dict[int, Dyadic] = {}
    idx = 0

    def flush(sign: int, coeff: Dyadic | None, mask: int) -> None:
        c = coeff if coeff is not None else D_ONE
        if sign < 0:
            c = -c
        coeffs[mask] = coeffs.get(mask, D_ZERO) + c

    while idx < len(tokens):
        sign = 1
        while tokens[idx] in "+-":
            if tokens[idx] == "-":
                sign = -sign
            idx += 1
            if idx >= len(tokens):
                raise RingError("dangling sign in ring expression")
        coeff: Dyadic | None = None
        mask = 0
        expect_factor = True
        while idx < len(tokens) and tokens[idx] not in "+-":
            tok = tokens[idx]
            if tok in ("*", "·"):
                if expect_factor:
                    raise RingError("misplaced '*' in ring expression")
                expect_factor = True
                idx += 1
                continue
            if not expect_factor:
                raise RingError(f"missing operator before {tok!r}")
            if tok[0].isdigit():
                if coeff is not None or mask:
                    raise RingError("coefficient must come first in a term")
                coeff = Dyadic.from_str(tok)
            else:
                try:
                    j = tower.names.index(tok)
                except ValueError:
                    raise RingError(f"unknown generator {tok!r}") from None
                bit = 1 << j
                if mask & bit:
                    raise RingError(f"repeated generator {tok!r} in monomial")
                mask |= bit
            expect_factor = False
            idx += 1
        if expect_factor:
            raise RingError("incomplete term in ring expression")
        flush(sign, coeff, mask)
    return tower.from_coeffs(coeffs)


# -- standard towers ---------------------------------------------------------


def make_cyclotomic_tower(n: int) -> TowerSpec:
    """Tower for the 2^n-th cyclotomic ring, generators i, w, w16, ..., w_{2^n}.

    Generator j embeds to e^{2 pi i / 2^{j+2}}; each one squares to the
    previous, starting from i^2 = -1.  n = 3 gives the Clifford+T ring
    Z[i, 1/sqrt(2)] (together with the dyadic scalars).
    """
    if n < 2:
        raise RingError("cyclotomic tower needs n >= 2")
    gens = []
    for j in range(n - 1):
        if j == 0:
            name, square = "i", {0: -1}
        else:
            name = "w" if j == 1 else f"w{1 << (j + 2)}"
            square = {1 << (j - 1): 1}
        conj = {(1 << (j + 1)) - 1: -1}  # conj(g_j) = -(g_1 g_2 ... g_j)
        gens.append((name, square, conj, cmath.exp(2j * cmath.pi / (1 << (j + 2)))))
    return TowerSpec(gens)


def make_clifford_t_tower() -> TowerSpec:
    """The default 2-generator tower Z[1/2][i, w] with w = e^{i pi / 4}."""
    return make_cyclotomic_tower(3)


def make_gaussian_tower() -> TowerSpec:
    """The single-generator tower Z[1/2][i]."""
    return make_cyclotomic_tower(2)
