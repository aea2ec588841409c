"""Standard, costandard, simple and indecomposable tilting modules.

Constructors are memoized per (ell, kind, n).  Decomposition into
indecomposables is done by the split-pair test: a candidate C splits off M as
soon as some composite M -> C -> M ... C -> M -> C is invertible, which for
candidates with local endomorphism ring is detected by a nonzero trace.
"""

from __future__ import annotations

from tiltlab.characters import Character, is_nonneg_weyl_sum, weyl_character
from tiltlab.cyclotomic import CycloField
from tiltlab.linalg import ExactMatrix
from tiltlab.modules import (
    UModule,
    UMorphism,
    dual_module,
    hom_space,
    image_module,
    kernel_module,
    quotient_module,
    submodule_generated,
    tensor_module,
)

_weyl_cache: dict = {}
_nabla_cache: dict = {}
_simple_cache: dict = {}
_tilting_cache: dict = {}


def weyl_module(field: CycloField, n: int) -> UModule:
    """Delta(n) in the divided-power basis m_0..m_n."""
    if n < 0:
        raise ValueError("highest weight must be nonnegative")
    key = (field.ell, n)
    if key in _weyl_cache:
        return _weyl_cache[key]
    ell = field.ell
    dim = n + 1
    weights = tuple(n - 2 * i for i in range(dim))
    K = ExactMatrix(field, dim, dim)
    for i, w in enumerate(weights):
        K.data[i][i] = field.zeta_power(w)
    E = ExactMatrix(field, dim, dim)
    F = ExactMatrix(field, dim, dim)
    El = ExactMatrix(field, dim, dim)
    Fl = ExactMatrix(field, dim, dim)
    for i in range(dim):
        if i + 1 < dim:
            F.data[i + 1][i] = field.quantum_binomial(i + 1, 1)
        if i + ell < dim:
            Fl.data[i + ell][i] = field.quantum_binomial(i + ell, ell)
        if i - 1 >= 0:
            E.data[i - 1][i] = field.quantum_binomial(n - i + 1, 1)
        if i - ell >= 0:
            El.data[i - ell][i] = field.quantum_binomial(n - i + ell, ell)
    M = UModule(field, weights, K, E, F, El, Fl)
    _weyl_cache[key] = M
    return M


def dual_weyl_module(field: CycloField, n: int) -> UModule:
    key = (field.ell, n)
    if key not in _nabla_cache:
        _nabla_cache[key] = dual_module(weyl_module(field, n))
    return _nabla_cache[key]


def simple_module(field: CycloField, n: int) -> UModule:
    """L(n) as the image of the one-dimensional Hom(Delta(n), Nabla(n))."""
    key = (field.ell, n)
    if key in _simple_cache:
        return _simple_cache[key]
    delta = weyl_module(field, n)
    nabla = dual_weyl_module(field, n)
    homs = hom_space(delta, nabla)
    if len(homs) != 1:
        raise ArithmeticError(f"Hom(Delta({n}), Nabla({n})) has dimension {len(homs)}")
    L, _ = image_module(homs[0])
    _simple_cache[key] = L
    return L


def steinberg_dimension(field: CycloField, n: int) -> int:
    """dim L(a*ell+b) = (a+1)(b+1): independent cross-check oracle."""
    a, b = divmod(n, field.ell)
    return (a + 1) * (b + 1)


# ---------------------------------------------------------------------------
# endomorphism-ring tools


def end_algebra(M: UModule):
    return hom_space(M, M)


def _trace(mat: ExactMatrix):
    field = mat.field
    acc = field.zero
    for i in range(mat.rows):
        acc = acc + mat.data[i][i]
    return acc


def _trace_of_product(a: ExactMatrix, b: ExactMatrix):
    field = a.field
    acc = field.zero
    for i in range(a.rows):
        arow = a.data[i]
        for j in range(a.cols):
            x = arow[j]
            if not x.is_zero():
                y = b.data[j][i]
                if not y.is_zero():
                    acc = acc + x * y
    return acc


def radical_dimension(end_basis) -> int:
    """dim of the nilradical, via the radical of the trace form (char 0)."""
    k = len(end_basis)
    if k == 0:
        return 0
    field = end_basis[0].source.field
    gram = ExactMatrix(field, k, k)
    for i in range(k):
        for j in range(i, k):
            v = _trace_of_product(end_basis[i].matrix, end_basis[j].matrix)
            gram.data[i][j] = v
            gram.data[j][i] = v
    return gram.kernel().cols


def is_local_end(M: UModule, end_basis=None) -> bool:
    """End(M)/rad is one-dimensional (M indecomposable, split case)."""
    if M.dim == 0:
        return False
    basis = end_basis if end_basis is not None else end_algebra(M)
    return len(basis) - radical_dimension(basis) == 1


# ---------------------------------------------------------------------------
# splitting machinery


class NonSplitError(ArithmeticError):
    """End(M)/rad could not be split over Q(zeta); reported, never guessed."""


class Part:
    __slots__ = ("label", "module", "inclusion", "projection")

    def __init__(self, label, module, inclusion, projection):
        self.label = label
        self.module = module
        self.inclusion = inclusion  # part -> M
        self.projection = projection  # M -> part

    def __repr__(self):
        return f"Part({self.label}, dim={self.module.dim})"


class DecompositionResult:
    def __init__(self, module, parts):
        self.module = module
        self.parts = parts

    def label_multiset(self):
        out = {}
        for p in self.parts:
            out[p.label] = out.get(p.label, 0) + 1
        return out

    def summary(self):
        return sorted(self.label_multiset().items(), key=lambda kv: str(kv[0]))

    def tilting_weights(self):
        """Sorted list of n over all parts labelled ('T', n); raises otherwise."""
        out = []
        for p in self.parts:
            if not (isinstance(p.label, tuple) and p.label[0] == "T"):
                raise ValueError(f"non-tilting part {p.label} in decomposition")
            out.append(p.label[1])
        return sorted(out, reverse=True)

    def __repr__(self):
        return f"DecompositionResult({self.summary()})"


def _split_pair(R: UModule, C: UModule):
    """Find phi: C -> R, psi: R -> C with psi o phi = id_C, or None.

    Valid when End(C) is local and split: the composite g o f is invertible
    iff its trace is nonzero, and the trace pairing is bilinear, so scanning
    basis pairs is exhaustive.
    """
    if C.dim == 0 or R.dim < C.dim:
        return None
    homs_in = hom_space(C, R)
    if not homs_in:
        return None
    homs_out = hom_space(R, C)
    if not homs_out:
        return None
    for f in homs_in:
        for g in homs_out:
            if not _trace_of_product(g.matrix, f.matrix).is_zero():
                gf = g.matrix @ f.matrix
                det = gf.determinant()
                if det.is_zero():
                    continue
                psi = UMorphism(R, C, gf.inverse() @ g.matrix)
                return f, psi
    return None


def _complement_of_idempotent(R: UModule, e_mat: ExactMatrix):
    """Kernel of an idempotent endomorphism, with inclusion and retraction."""
    field = R.field
    K, incl = kernel_module(UMorphism(R, R, e_mat))
    # retraction: x -> coordinates of (1 - e)x in the kernel basis
    one_minus = ExactMatrix.identity(field, R.dim) - e_mat
    sol = incl.matrix.solve(one_minus)
    if sol is None:
        raise ArithmeticError("idempotent complement failed to solve")
    retr = UMorphism(R, K, sol)
    return K, incl, retr


def _identify_label(M: UModule):
    """Label an indecomposable by matching against the standard families."""
    from tiltlab.modules import find_isomorphism

    field = M.field
    top = M.character.max_weight()
    if top is None:
        return None
    candidates = []
    if top >= 0:
        candidates = [
            ("T", tilting_module(field, top)),
            ("Delta", weyl_module(field, top)),
            ("Nabla", dual_weyl_module(field, top)),
            ("L", simple_module(field, top)),
        ]
    for kind, C in candidates:
        if C.dim == M.dim and find_isomorphism(M, C) is not None:
            return (kind, top)
    return ("X", M.fingerprint()[:12])


def decompose_indecomposables(M: UModule, tilting_only: bool = False) -> DecompositionResult:
    """Krull-Schmidt decomposition with witness inclusions and projections.

    Tilting summands are peeled greedily from the largest weight down; for
    whatever remains, the endomorphism ring decides: local means
    indecomposable, otherwise Fitting splittings are tried and an explicit
    NonSplitError is raised rather than guessing.
    """
    field = M.field
    parts = []
    stack = [(M, UMorphism.identity(M), UMorphism.identity(M))]
    while stack:
        R, incl, proj = stack.pop()
        if R.dim == 0:
            continue
        split = None
        for label, C in _candidate_stream(field, R, tilting_only):
            split = _split_pair(R, C)
            if split is not None:
                phi, psi = split
                parts.append(
                    Part(label, C, incl.compose(phi), psi.compose(proj))
                )
                e = phi.matrix @ psi.matrix
                K, kincl, kretr = _complement_of_idempotent(R, e)
                stack.append((K, incl.compose(kincl), kretr.compose(proj)))
                break
        if split is not None:
            continue
        if tilting_only:
            raise NonSplitError(
                f"module of dim {R.dim} has no tilting summand left but is nonzero"
            )
        ends = end_algebra(R)
        if len(ends) - radical_dimension(ends) == 1:
            parts.append(Part(_identify_label(R), R, incl, proj))
            continue
        fits = _fitting_split(R, ends)
        if fits is None:
            raise NonSplitError(
                f"End(M)/rad has dimension > 1 but no splitting was found (dim {R.dim})"
            )
        for sub, sincl, sretr in fits:
            stack.append((sub, incl.compose(sincl), sretr.compose(proj)))
    total = sum(p.module.dim for p in parts)
    if total != M.dim:
        raise ArithmeticError("decomposition lost dimensions")
    return DecompositionResult(M, parts)


def _candidate_stream(field, R: UModule, tilting_only: bool):
    ch = R.character
    tops = sorted({w for w in ch.coeffs if w >= 0}, reverse=True)
    for mu in tops:
        yield ("T", mu), tilting_module(field, mu)
    if not tilting_only:
        for mu in tops:
            yield ("Delta", mu), weyl_module(field, mu)
            yield ("Nabla", mu), dual_weyl_module(field, mu)
            yield ("L", mu), simple_module(field, mu)


def _fitting_split(R: UModule, ends):
    """Split R = ker(phi^N) + im(phi^N) for some endomorphism, or None."""
    import random

    field = R.field
    candidates = [e.matrix for e in ends]
    rng = random.Random(911 + R.dim)
    for _ in range(12):
        mat = ExactMatrix(field, R.dim, R.dim)
        for e in ends:
            mat = mat + e.matrix.scale(field.scalar(rng.randint(-2, 2)))
        candidates.append(mat)
    n = R.dim
    for mat in candidates:
        p = mat.power(_next_pow2(n))
        K, kincl = kernel_module(UMorphism(R, R, p))
        if K.dim == 0 or K.dim == R.dim:
            continue
        I, iincl = image_module(UMorphism(R, R, p))
        if K.dim + I.dim != R.dim:
            continue
        basis = kincl.matrix.hstack(iincl.matrix)
        inv = basis.inverse()
        kretr = UMorphism(R, K, ExactMatrix(field, K.dim, R.dim, inv.data[: K.dim]))
        iretr = UMorphism(R, I, ExactMatrix(field, I.dim, R.dim, inv.data[K.dim :]))
        return [(K, kincl, kretr), (I, iincl, iretr)]
    return None


def _next_pow2(n):
    p = 1
    while p < n:
        p *= 2
    return p


# ---------------------------------------------------------------------------
# tilting modules


def tilting_module(field: CycloField, n: int) -> UModule:
    """T(n) by tensor-and-peel: the summand of T(n-1) (x) T(1) at weight n."""
    if n < 0:
        raise ValueError("highest weight must be nonnegative")
    key = (field.ell, n)
    if key in _tilting_cache:
        return _tilting_cache[key]
    if n == 0:
        T = UModule.trivial(field)
    elif n == 1:
        T = weyl_module(field, 1)
    else:
        big = tensor_module(tilting_module(field, n - 1), weyl_module(field, 1))
        T = _extract_top_summand(big, n)
    _tilting_cache[key] = T
    return T


def _extract_top_summand(M: UModule, n: int) -> UModule:
    """Peel all T(mu), mu < n, off M; certify the local remainder."""
    field = M.field
    R = M
    incl = UMorphism.identity(M)
    changed = True
    while changed:
        changed = False
        tops = sorted({w for w in R.character.coeffs if 0 <= w < n}, reverse=True)
        for mu in tops:
            split = _split_pair(R, tilting_module(field, mu))
            if split is not None:
                phi, psi = split
                e = phi.matrix @ psi.matrix
                R, kincl, _ = _complement_of_idempotent(R, e)
                incl = incl.compose(kincl)
                changed = True
                break
    if R.character.max_weight() != n:
        raise ArithmeticError(f"tilting extraction lost the top weight {n}")
    ends = end_algebra(R)
    if len(ends) - radical_dimension(ends) != 1:
        raise ArithmeticError(f"remainder for T({n}) is not indecomposable")
    return R


def tilting_character(field: CycloField, n: int) -> Character:
    return tilting_module(field, n).character


def decompose_tilting_character(field: CycloField, ch: Character):
    """Multiset {n: multiplicity} with ch = sum of tilting characters.

    Characters of the T(n) are unitriangular against the weight order, so the
    greedy top-down subtraction is exact; a negative multiplicity means the
    input was not a tilting character and raises.
    """
    rest = Character(dict(ch.coeffs))
    out = {}
    while not rest.is_zero():
        top = rest.max_weight()
        if top is None or top < 0:
            raise ValueError("character is not a nonnegative sum of tilting characters")
        mult = rest.multiplicity(top)
        if mult <= 0:
            raise ValueError("character is not a nonnegative sum of tilting characters")
        tch = tilting_character(field, top)
        rest = rest - Character({w: mult * m for w, m in tch.coeffs.items()})
        out[top] = out.get(top, 0) + mult
        if any(m < 0 for m in rest.coeffs.values()):
            raise ValueError("character is not a nonnegative sum of tilting characters")
    return out


# ---------------------------------------------------------------------------
# standard filtrations


def peel_standard_filtration(M: UModule, side: str):
    """Ordered weights of a Delta- or Nabla-filtration, or None on failure.

    The Delta side repeatedly splits off a highest-weight submodule
    isomorphic to Delta(mu) for the maximal weight mu; the Nabla side is the
    dual procedure, realized by peeling the dual module.
    """
    if side == "nabla":
        return peel_standard_filtration(dual_module(M), "delta")
    if side != "delta":
        raise ValueError("side must be 'delta' or 'nabla'")
    # quick character screen: a Delta-filtered character is a nonneg Weyl sum
    if not is_nonneg_weyl_sum(M.character):
        return None
    peels = []
    R = M
    while R.dim:
        mu = R.character.max_weight()
        blocks = R.weight_blocks()
        found = False
        for idx in blocks[mu]:
            vec = [R.field.zero] * R.dim
            vec[idx] = R.field.one
            S, incl = submodule_generated(R, [vec])
            if S.dim == mu + 1 and S.character == weyl_character(mu):
                R, _ = quotient_module(R, incl)
                peels.append(mu)
                found = True
                break
        if not found:
            return None
    return peels


def is_tilting(M: UModule) -> bool:
    return (
        peel_standard_filtration(M, "delta") is not None
        and peel_standard_filtration(M, "nabla") is not None
    )
