"""Stationary dimension groups, exact positivity, and substitution invariants.

The group attached to a square integer matrix A is the inductive limit
of Z^n along repeated multiplication by A.  Elements are pairs
(stage, vector) with (k, v) identified with (k+1, A v).  When A is
nonnegative the limit carries an order; positivity of an element is an
eventual coordinatewise sign, decided exactly for primitive 2x2
matrices through the left Perron eigenvector in its quadratic field.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .matrix import IntMatrix, solve, unimodular_inverse
from .surd import (
    QuadraticIrrational,
    cf_expansion,
    convergent_matrix,
    equivalence_witness,
    mobius_apply,
    sturmian_equivalent,
)
from . import verdict as V

POSITIVE = "positive"
NEGATIVE = "negative"
ZERO = "zero"
UNKNOWN_SIGN = "unknown"


class StationaryDimensionGroup:
    """lim(Z^n -> Z^n -> ...) along a fixed square integer matrix."""

    __slots__ = ("matrix", "n", "ordered")

    def __init__(self, matrix: IntMatrix):
        if matrix.rows != matrix.cols:
            raise ValueError("stationary dimension group needs a square matrix")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "n", matrix.rows)
        ordered = all(matrix[i, j] >= 0 for i in range(matrix.rows) for j in range(matrix.cols))
        object.__setattr__(self, "ordered", ordered)

    def __setattr__(self, name, value):
        raise AttributeError("StationaryDimensionGroup is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, StationaryDimensionGroup) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def is_primitive(self) -> bool:
        """Some power strictly positive; Wielandt's exponent bound."""
        if not self.ordered:
            return False
        e = (self.n - 1) ** 2 + 1
        P = self.matrix.power(e)
        return all(P[i, j] > 0 for i in range(self.n) for j in range(self.n))

    def determinant(self) -> int:
        return self.matrix.det()

    def is_finitely_generated(self) -> bool | None:
        """True for |det| = 1, False for |det| >= 2, None for det = 0.

        With det nonzero the limit is the increasing union of the
        lattices A^-k Z^n inside Q^n; the index jumps by |det| at each
        step, so the union is finitely generated exactly when |det| = 1.
        """
        d = abs(self.determinant())
        if d == 1:
            return True
        if d >= 2:
            return False
        return None


@dataclass(frozen=True)
class DGElement:
    stage: int
    vector: tuple[int, ...]

    def __post_init__(self):
        if self.stage < 0:
            raise ValueError("stage must be nonnegative")
        object.__setattr__(self, "vector", tuple(self.vector))


def _check_element(G: StationaryDimensionGroup, x: DGElement):
    if len(x.vector) != G.n:
        raise ValueError("vector length does not match the group")


def dg_shift(G: StationaryDimensionGroup, x: DGElement, steps: int) -> DGElement:
    _check_element(G, x)
    v = x.vector
    for _ in range(steps):
        v = G.matrix.apply(v)
    return DGElement(x.stage + steps, v)


def _aligned(G, x, y):
    m = max(x.stage, y.stage)
    return dg_shift(G, x, m - x.stage).vector, dg_shift(G, y, m - y.stage).vector


def dg_is_zero(G: StationaryDimensionGroup, x: DGElement) -> bool:
    # (k, v) is zero iff some power kills v; kernels stabilize by step n
    _check_element(G, x)
    killed = G.matrix.power(G.n).apply(x.vector)
    return all(c == 0 for c in killed)


def dg_equal(G: StationaryDimensionGroup, x: DGElement, y: DGElement) -> bool:
    vx, vy = _aligned(G, x, y)
    diff = tuple(a - b for a, b in zip(vx, vy))
    return dg_is_zero(G, DGElement(0, diff))


def dg_add(G: StationaryDimensionGroup, x: DGElement, y: DGElement) -> DGElement:
    vx, vy = _aligned(G, x, y)
    return DGElement(max(x.stage, y.stage), tuple(a + b for a, b in zip(vx, vy)))


def dg_neg(x: DGElement) -> DGElement:
    return DGElement(x.stage, tuple(-a for a in x.vector))


def dg_canonical(G: StationaryDimensionGroup, x: DGElement) -> tuple[int, ...]:
    """Stage-0 coordinates of x; needs |det| = 1 so every pullback exists."""
    if abs(G.determinant()) != 1:
        raise ValueError("canonical coordinates need a unimodular matrix")
    _check_element(G, x)
    v = x.vector
    for _ in range(x.stage):
        v = solve(G.matrix, v)
        assert v is not None
    return tuple(v)


def perron_slope(G: StationaryDimensionGroup) -> QuadraticIrrational:
    """omega with (1, omega) the left Perron eigenvector of a primitive 2x2 matrix.

    Raises when the eigenvalue is rational (square discriminant); the
    caller falls back to iteration in that case.
    """
    if G.n != 2:
        raise ValueError("Perron slope is a 2x2 device")
    if not G.is_primitive():
        raise ValueError("Perron slope needs a primitive matrix")
    a11, a12 = G.matrix[0, 0], G.matrix[0, 1]
    a21, a22 = G.matrix[1, 0], G.matrix[1, 1]
    disc = (a11 - a22) * (a11 - a22) + 4 * a12 * a21
    w = QuadraticIrrational(a22 - a11, 1, 2 * a21, disc)
    if w.is_rational:
        raise ValueError("rational Perron eigenvalue")
    return w


def dg_positive(G: StationaryDimensionGroup, x: DGElement, bound: int = 64) -> str:
    """Eventual sign of an element: positive, negative, zero, or unknown.

    Unknown can only come out of the iteration fallback; the 2x2
    irrational-slope case is decided exactly by the sign of v0 + omega v1.
    """
    if not G.ordered:
        raise ValueError("positivity needs a nonnegative matrix")
    if not G.is_primitive():
        raise ValueError("positivity needs a primitive matrix")
    _check_element(G, x)
    if dg_is_zero(G, x):
        return ZERO
    if G.n == 2:
        try:
            w = perron_slope(G)
        except ValueError:
            w = None
        if w is not None:
            s = (w * x.vector[1] + x.vector[0]).sign()
            if s > 0:
                return POSITIVE
            if s < 0:
                return NEGATIVE
            return ZERO
    v = list(x.vector)
    for _ in range(bound):
        if all(c >= 0 for c in v):
            return POSITIVE
        if all(c <= 0 for c in v):
            return NEGATIVE
        v = list(G.matrix.apply(v))
    return UNKNOWN_SIGN


def _inv2(M: IntMatrix) -> IntMatrix:
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    if det not in (1, -1):
        raise ValueError("matrix is not unimodular")
    return IntMatrix([[det * M[1, 1], -det * M[0, 1]],
                      [-det * M[1, 0], det * M[0, 0]]])


def is_positive_slope_map(G1: StationaryDimensionGroup, G2: StationaryDimensionGroup,
                          H: IntMatrix) -> bool:
    """Whether H carries the cone of G1 onto the cone of G2.

    The cone of a primitive 2x2 group with irrational slope omega is the
    open half plane v0 + omega v1 > 0, so H is an order isomorphism iff
    (1, omega2) H = lam (1, omega1) with lam > 0 and H unimodular.
    """
    if H.rows != 2 or H.cols != 2 or H.det() not in (1, -1):
        return False
    w1, w2 = perron_slope(G1), perron_slope(G2)
    if w1.d != w2.d:
        return False
    u = w2 * H[1, 0] + H[0, 0]
    v = w2 * H[1, 1] + H[0, 1]
    return u.sign() > 0 and v == u * w1


def order_iso_base(G1: StationaryDimensionGroup, G2: StationaryDimensionGroup) -> IntMatrix | None:
    """One order isomorphism (Z^2, cone of G1) -> (Z^2, cone of G2), or None."""
    w1, w2 = perron_slope(G1), perron_slope(G2)
    if w1.d != w2.d:
        return None
    W = equivalence_witness(w2, w1)
    if W is None:
        return None
    H = IntMatrix([[W[1, 1], W[0, 1]], [W[1, 0], W[0, 0]]])
    if (w2 * H[1, 0] + H[0, 0]).sign() < 0:
        H = -H
    assert is_positive_slope_map(G1, G2, H)
    return H


def cone_stabilizer_generator(G: StationaryDimensionGroup) -> IntMatrix:
    """Generator of the order-automorphism group of a rank-2 stationary group.

    The stabilizer of the slope in the integral Moebius group is the
    cyclic group on the minimal-period convergent matrix, conjugated by
    the preperiod; the sign is fixed to make the eigenvalue positive.
    """
    w = perron_slope(G)
    pre, per = cf_expansion(w)
    C = convergent_matrix(pre)
    W = C @ convergent_matrix(per) @ _inv2(C)
    assert mobius_apply(W, w) == w
    U = IntMatrix([[W[1, 1], W[0, 1]], [W[1, 0], W[0, 0]]])
    if (w * U[1, 0] + U[0, 0]).sign() < 0:
        U = -U
    assert is_positive_slope_map(G, G, U)
    return U


class SubstitutionInvariant:
    """The finite comparison data (n, p, A, A~) of a substitution system.

    A~ must be block triangular: the first n coordinates are the special
    block, the lower-left block is zero, and the lower-right block
    equals A.  A itself is nonnegative.
    """

    __slots__ = ("n", "p", "A", "A_tilde")

    def __init__(self, n: int, p, A: IntMatrix, A_tilde: IntMatrix):
        if n < 1:
            raise ValueError("need at least one distinguished generator")
        p = tuple(p)
        if len(p) != n:
            raise ValueError("distinguished vector length differs from n")
        if A.rows != A.cols or A.rows < 1:
            raise ValueError("A must be square and nonempty")
        if any(A[i, j] < 0 for i in range(A.rows) for j in range(A.cols)):
            raise ValueError("A must be nonnegative")
        m = A.rows
        if A_tilde.rows != A_tilde.cols or A_tilde.rows != n + m:
            raise ValueError("A~ must be square of size n + |alphabet|")
        for i in range(n, n + m):
            for j in range(n):
                if A_tilde[i, j] != 0:
                    raise ValueError("lower-left block of A~ must vanish")
        for i in range(m):
            for j in range(m):
                if A_tilde[n + i, n + j] != A[i, j]:
                    raise ValueError("lower-right block of A~ must equal A")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "A_tilde", A_tilde)

    def __setattr__(self, name, value):
        raise AttributeError("SubstitutionInvariant is immutable")

    @property
    def alphabet_size(self) -> int:
        return self.A.rows

    def __eq__(self, other) -> bool:
        return (isinstance(other, SubstitutionInvariant) and self.n == other.n
                and self.p == other.p and self.A == other.A and self.A_tilde == other.A_tilde)

    def __hash__(self) -> int:
        return hash((self.n, self.p, self.A, self.A_tilde))

    def to_json(self) -> dict:
        return {"n": self.n, "p": list(self.p), "A": self.A.to_lists(),
                "A_tilde": self.A_tilde.to_lists()}

    @classmethod
    def from_json(cls, data: dict) -> "SubstitutionInvariant":
        try:
            n = data["n"]
            p = data["p"]
            A = IntMatrix(data["A"])
            At = IntMatrix(data["A_tilde"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed substitution invariant: {exc}") from exc
        if not isinstance(n, int) or not all(isinstance(x, int) for x in p):
            raise ValueError("n and p must be integers")
        return cls(n, p, A, At)


@dataclass(frozen=True)
class ScaledInvariant:
    group: StationaryDimensionGroup
    scale: tuple[DGElement, ...]


def extension_scale(inv: SubstitutionInvariant) -> list[DGElement]:
    """Classes of the distinguished basis vectors inside the big group.

    These are the images under the stage-0 inclusion of Z^n into the
    limit of A~; the delivered scale projects them onward to the small
    group.
    """
    m = inv.alphabet_size
    out = []
    for i in range(inv.n):
        vec = tuple(1 if j == i else 0 for j in range(inv.n)) + (0,) * m
        out.append(DGElement(0, vec))
    return out


def scaled_triple(inv: SubstitutionInvariant) -> ScaledInvariant:
    """The reduced invariant: ordered group of A plus the projected scale.

    The projection drops the first n coordinates, so each scale entry is
    the class of the zero vector whenever the block contract holds; the
    multiset still carries its size.
    """
    big = extension_scale(inv)
    scale = tuple(DGElement(0, q.vector[inv.n:]) for q in big)
    return ScaledInvariant(StationaryDimensionGroup(inv.A), scale)


def _matching_permutation(p1, p2) -> list[int] | None:
    """sigma with p2[sigma[i]] = p1[i], or None."""
    if sorted(p1) != sorted(p2):
        return None
    slots: dict[int, list[int]] = {}
    for j, val in enumerate(p2):
        slots.setdefault(val, []).append(j)
    sigma = []
    for val in p1:
        sigma.append(slots[val].pop(0))
    return sigma


def _permutation_matrix(sigma: list[int]) -> IntMatrix:
    n = len(sigma)
    return IntMatrix([[1 if sigma[j] == i else 0 for j in range(n)] for i in range(n)])


def _blockdiag(P: IntMatrix, Q: IntMatrix) -> IntMatrix:
    top = IntMatrix.hstack(P, IntMatrix.zeros(P.rows, Q.cols))
    bot = IntMatrix.hstack(IntMatrix.zeros(Q.rows, P.cols), Q)
    return IntMatrix.vstack(top, bot)


def _subst_witness(i1: SubstitutionInvariant, i2: SubstitutionInvariant,
                   sigma: list[int], psi: IntMatrix) -> dict:
    phi1 = _permutation_matrix(sigma)
    w = {"p_permutation": sigma, "phi1": phi1.to_lists(), "phi3": psi.to_lists()}
    phi2 = _blockdiag(phi1, psi)
    unimodular = abs(i1.A_tilde.det()) == 1 and abs(i2.A_tilde.det()) == 1
    intertwines = i2.A_tilde @ phi2 == phi2 @ i1.A_tilde
    # phi2 is a genuine map of the limits only when the big matrices are
    # unimodular (stage-0 identification) or the block map intertwines exactly
    if unimodular or intertwines:
        w["phi2"] = phi2.to_lists()
    else:
        w["phi2"] = None
    return w


def check_subst_witness(i1: SubstitutionInvariant, i2: SubstitutionInvariant,
                        witness: dict) -> bool:
    """Verify every claim a comparison witness makes, exactly.

    phi1 must be the stated permutation carrying p1 to p2, phi3 an
    order isomorphism of the reduced groups, and phi2, when present,
    unimodular with phi1 in the top-left block, zeros below it, and
    phi3 in the bottom-right, intertwining the big matrices unless both
    are unimodular.
    """
    try:
        sigma = list(witness["p_permutation"])
        phi1 = IntMatrix(witness["phi1"])
        psi = IntMatrix(witness["phi3"])
    except (KeyError, TypeError, ValueError):
        return False
    n, m = i1.n, i1.alphabet_size
    if i2.n != n or i2.alphabet_size != m:
        return False
    if sorted(sigma) != list(range(n)) or phi1 != _permutation_matrix(sigma):
        return False
    if tuple(phi1.apply(i1.p)) != i2.p:
        return False
    if psi.rows != m or psi.cols != m or abs(psi.det()) != 1:
        return False
    G1 = StationaryDimensionGroup(i1.A)
    G2 = StationaryDimensionGroup(i2.A)
    psi_ok = False
    if psi @ i1.A == i2.A @ psi:
        inv = _safe_inverse(psi)
        psi_ok = (inv is not None and _nonneg(psi) and _nonneg(inv))
    if not psi_ok and m == 2:
        try:
            psi_ok = is_positive_slope_map(G1, G2, psi)
        except ValueError:
            psi_ok = False
    if not psi_ok:
        return False
    phi2_raw = witness.get("phi2")
    if phi2_raw is not None:
        try:
            phi2 = IntMatrix(phi2_raw)
        except (TypeError, ValueError):
            return False
        if phi2.rows != n + m or phi2.cols != n + m or abs(phi2.det()) != 1:
            return False
        for j in range(n):
            want = tuple(phi1.column(j)) + (0,) * m
            if phi2.column(j) != want:
                return False
        for j in range(m):
            if phi2.column(n + j)[n:] != psi.column(j):
                return False
        both_unimodular = abs(i1.A_tilde.det()) == 1 and abs(i2.A_tilde.det()) == 1
        if not both_unimodular and i2.A_tilde @ phi2 != phi2 @ i1.A_tilde:
            return False
    return True


def _nonneg(M: IntMatrix) -> bool:
    return all(M[i, j] >= 0 for i in range(M.rows) for j in range(M.cols))


def _safe_inverse(M: IntMatrix) -> IntMatrix | None:
    try:
        return unimodular_inverse(M)
    except ValueError:
        return None


def compare_substitution_invariants(i1: SubstitutionInvariant, i2: SubstitutionInvariant,
                                    bound: int = 64) -> V.IsoVerdict:
    """Decide equivalence of two substitution invariants.

    Pipeline: sizes and distinguished vectors first, then the reduced
    ordered-group comparison: structural equality, permutation
    conjugacy, finite-generation type, and for primitive 2x2 unimodular
    matrices the exact Perron-slope decision.  Unknown is returned when
    no exact engine applies.  The vanishing lower-left block makes every
    projected scale class zero, so the distinguished vectors carry the
    whole scale constraint.
    """
    if i1.n != i2.n:
        return V.not_isomorphic("numbers of distinguished generators differ")
    if i1 == i2:
        n, m = i1.n, i1.alphabet_size
        sigma = list(range(n))
        return V.isomorphic(_subst_witness(i1, i2, sigma, IntMatrix.identity(m)))
    sigma = _matching_permutation(i1.p, i2.p)
    if sigma is None:
        return V.not_isomorphic("distinguished vectors do not match under any permutation")
    m1, m2 = i1.alphabet_size, i2.alphabet_size
    G1 = StationaryDimensionGroup(i1.A)
    G2 = StationaryDimensionGroup(i2.A)
    if m1 == m2 and m1 <= 8:
        for perm in itertools.permutations(range(m1)):
            P = _permutation_matrix(list(perm))
            if P @ i1.A == i2.A @ P:
                return V.isomorphic(_subst_witness(i1, i2, sigma, P))
    det1, det2 = G1.determinant(), G2.determinant()
    if det1 != 0 and det2 != 0 and m1 != m2:
        # nonzero determinant pins the torsion-free rank at the matrix size
        return V.not_isomorphic("group ranks differ")
    fg1, fg2 = G1.is_finitely_generated(), G2.is_finitely_generated()
    if fg1 is None or fg2 is None:
        return V.unknown("a vanishing determinant leaves the group type undecided here")
    if fg1 != fg2:
        return V.not_isomorphic("one group is finitely generated, the other is not")
    if not fg1:
        return V.unknown("no exact engine for two non-finitely-generated groups")
    if m1 == 2 and G1.is_primitive() and G2.is_primitive():
        try:
            w1, w2 = perron_slope(G1), perron_slope(G2)
        except ValueError:
            return V.unknown("rational Perron data fall outside the exact engine")
        if not sturmian_equivalent(w1, w2):
            return V.not_isomorphic("Perron slope classes are inequivalent")
        psi = order_iso_base(G1, G2)
        assert psi is not None
        return V.isomorphic(_subst_witness(i1, i2, sigma, psi))
    return V.unknown("beyond the exact rank-2 engine")
