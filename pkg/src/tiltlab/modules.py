"""Finite-dimensional type-one modules for quantum sl2 with divided powers.

A module is given by the five generator matrices K, E, F, E^(l), F^(l) over
Q(zeta_ell), together with the integer weight of every basis vector.  All
constructors in this package produce weight-homogeneous bases (K diagonal),
which lets Hom spaces, submodules and quotients be computed one weight block
at a time.
"""

from __future__ import annotations

from tiltlab.characters import Character
from tiltlab.cyclotomic import CycloField, MismatchedFieldError
from tiltlab.linalg import ExactMatrix, SparseSystem


def _shifts(ell):
    return (("E", 2), ("F", -2), ("El", 2 * ell), ("Fl", -2 * ell))


class UModule:
    __slots__ = ("field", "dim", "weights", "K", "E", "F", "El", "Fl",
                 "_blocks", "_char", "_fp")

    def __init__(self, field: CycloField, weights, K, E, F, El, Fl):
        self.field = field
        self.weights = tuple(weights)
        self.dim = len(self.weights)
        for name, m in (("K", K), ("E", E), ("F", F), ("El", El), ("Fl", Fl)):
            if m.shape != (self.dim, self.dim):
                raise ValueError(f"{name} has shape {m.shape}, expected square dim {self.dim}")
        self.K, self.E, self.F, self.El, self.Fl = K, E, F, El, Fl
        self._blocks = None
        self._char = None
        self._fp = None

    @classmethod
    def zero_module(cls, field):
        z = ExactMatrix(field, 0, 0)
        return cls(field, (), z, z.copy(), z.copy(), z.copy(), z.copy())

    @classmethod
    def trivial(cls, field):
        one = ExactMatrix.identity(field, 1)
        z = ExactMatrix(field, 1, 1)
        return cls(field, (0,), one, z, z.copy(), z.copy(), z.copy())

    def generators(self):
        return {"K": self.K, "E": self.E, "F": self.F, "El": self.El, "Fl": self.Fl}

    @property
    def character(self) -> Character:
        if self._char is None:
            self._char = Character.from_weights(self.weights)
        return self._char

    def weight_blocks(self):
        """weight -> ordered list of basis indices."""
        if self._blocks is None:
            blocks = {}
            for i, w in enumerate(self.weights):
                blocks.setdefault(w, []).append(i)
            self._blocks = blocks
        return self._blocks

    def k_inverse(self) -> ExactMatrix:
        field = self.field
        out = ExactMatrix(field, self.dim, self.dim)
        for i, w in enumerate(self.weights):
            out.data[i][i] = field.zeta_power(-w)
        return out

    def k_power(self, n: int) -> ExactMatrix:
        field = self.field
        out = ExactMatrix(field, self.dim, self.dim)
        for i, w in enumerate(self.weights):
            out.data[i][i] = field.zeta_power(n * w)
        return out

    def block(self, gen_name: str, m: int) -> ExactMatrix:
        """Restriction of a generator to the map (weight m) -> (weight m+shift)."""
        shift = dict(_shifts(self.field.ell))[gen_name]
        g = getattr(self, gen_name)
        blocks = self.weight_blocks()
        src = blocks.get(m, [])
        tgt = blocks.get(m + shift, [])
        out = ExactMatrix(self.field, len(tgt), len(src))
        for a, r in enumerate(tgt):
            grow = g.data[r]
            for b, c in enumerate(src):
                out.data[a][b] = grow[c]
        return out

    def assert_weight_graded(self):
        """Cheap structural invariant: K diagonal with zeta^w, generators graded."""
        field = self.field
        for i in range(self.dim):
            for j in range(self.dim):
                v = self.K.data[i][j]
                if i == j:
                    if v != field.zeta_power(self.weights[i]):
                        raise ValueError(f"K[{i},{i}] is not zeta^{self.weights[i]}")
                elif not v.is_zero():
                    raise ValueError("K is not diagonal in the stored basis")
        for name, shift in _shifts(field.ell):
            g = getattr(self, name)
            for i in range(self.dim):
                for j in range(self.dim):
                    if not g.data[i][j].is_zero():
                        if self.weights[i] != self.weights[j] + shift:
                            raise ValueError(
                                f"{name} maps weight {self.weights[j]} to "
                                f"{self.weights[i]}, expected shift {shift}")

    def fingerprint(self) -> str:
        if self._fp is None:
            from tiltlab.serialize import module_fingerprint
            self._fp = module_fingerprint(self)
        return self._fp

    def __repr__(self):
        return f"UModule(dim={self.dim}, ell={self.field.ell})"


class UMorphism:
    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: UModule, target: UModule, matrix: ExactMatrix):
        if matrix.shape != (target.dim, source.dim):
            raise ValueError(
                f"morphism matrix {matrix.shape} does not map dim {source.dim} "
                f"to dim {target.dim}")
        self.source = source
        self.target = target
        self.matrix = matrix

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, ExactMatrix(source.field, target.dim, source.dim))

    @classmethod
    def identity(cls, module):
        return cls(module, module, ExactMatrix.identity(module.field, module.dim))

    def __add__(self, other):
        return UMorphism(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other):
        return UMorphism(self.source, self.target, self.matrix - other.matrix)

    def __neg__(self):
        return UMorphism(self.source, self.target, -self.matrix)

    def scale(self, scalar):
        return UMorphism(self.source, self.target, self.matrix.scale(scalar))

    def compose(self, other: "UMorphism") -> "UMorphism":
        """self after other (self o other)."""
        if other.target is not self.source and other.target.dim != self.source.dim:
            raise ValueError("composition dimension mismatch")
        return UMorphism(other.source, self.target, self.matrix @ other.matrix)

    def is_zero(self):
        return self.matrix.is_zero()

    def is_intertwiner(self) -> bool:
        for name in ("K", "E", "F", "El", "Fl"):
            gs = getattr(self.source, name)
            gt = getattr(self.target, name)
            if (self.matrix @ gs) != (gt @ self.matrix):
                return False
        return True

    def is_injective(self):
        return self.matrix.rank() == self.source.dim

    def is_surjective(self):
        return self.matrix.rank() == self.target.dim

    def __repr__(self):
        return f"UMorphism({self.source.dim} -> {self.target.dim})"


# ---------------------------------------------------------------------------
# relation checking


class RelationReport:
    def __init__(self):
        self.failures = []  # (relation name, witness column)

    def record(self, name, witness):
        self.failures.append((name, witness))

    @property
    def ok(self):
        return not self.failures

    def __repr__(self):
        if self.ok:
            return "RelationReport(ok)"
        return f"RelationReport(failed={self.failures})"


def _first_bad_column(diff: ExactMatrix):
    for j in range(diff.cols):
        for i in range(diff.rows):
            if not diff.data[i][j].is_zero():
                return j
    return None


def check_relations(M: UModule) -> RelationReport:
    """Verify the defining relations of the divided-power algebra exactly."""
    field = M.field
    ell = field.ell
    rep = RelationReport()
    if M.dim == 0:
        return rep
    try:
        Kinv = M.K.inverse()
    except ZeroDivisionError:
        rep.record("K invertible", 0)
        return rep
    z2 = field.zeta_power(2)
    zm2 = field.zeta_power(-2)

    def expect_zero(name, diff):
        w = _first_bad_column(diff)
        if w is not None:
            rep.record(name, w)

    expect_zero("K E K^-1 = z^2 E", (M.K @ M.E @ Kinv) - M.E.scale(z2))
    expect_zero("K F K^-1 = z^-2 F", (M.K @ M.F @ Kinv) - M.F.scale(zm2))
    qinv = field.qone_minus.inverse()
    cartan = (M.K - Kinv).scale(qinv)
    expect_zero("[E,F] = (K - K^-1)/(z - z^-1)", (M.E @ M.F) - (M.F @ M.E) - cartan)
    expect_zero("E^ell = 0", M.E.power(ell))
    expect_zero("F^ell = 0", M.F.power(ell))
    expect_zero("K E^(l) K^-1 = E^(l)", (M.K @ M.El @ Kinv) - M.El)
    expect_zero("K F^(l) K^-1 = F^(l)", (M.K @ M.Fl @ Kinv) - M.Fl)

    # mixed divided-power commutators; F^(l-1) = F^(l-1)/[l-1]! etc.
    fact_inv = field.quantum_factorial(ell - 1).inverse()
    F_lm1 = M.F.power(ell - 1).scale(fact_inv)
    E_lm1 = M.E.power(ell - 1).scale(fact_inv)
    zl1 = field.zeta_power(-(ell - 1))
    zl2 = field.zeta_power(ell - 1)
    mid_f = (M.K.scale(zl1) - Kinv.scale(zl2)).scale(qinv)
    expect_zero(
        "E F^(l) - F^(l) E = F^(l-1) (K z^(1-l) - K^-1 z^(l-1))/(z - z^-1)",
        (M.E @ M.Fl) - (M.Fl @ M.E) - (F_lm1 @ mid_f),
    )
    mid_e = (Kinv.scale(zl1) - M.K.scale(zl2)).scale(qinv)
    expect_zero(
        "F E^(l) - E^(l) F = E^(l-1) (K^-1 z^(1-l) - K z^(l-1))/(z - z^-1)",
        (M.F @ M.El) - (M.El @ M.F) - (E_lm1 @ mid_e),
    )
    return rep


# ---------------------------------------------------------------------------
# tensor, dual, Frobenius twist, direct sum


def divided_power(M: UModule, gen: str, a: int) -> ExactMatrix:
    """E^(a) or F^(a) on M for 0 <= a <= ell, via E^a/[a]! below ell."""
    field = M.field
    ell = field.ell
    if a == 0:
        return ExactMatrix.identity(field, M.dim)
    if a == ell:
        return M.El if gen == "E" else M.Fl
    if a > ell:
        raise ValueError("divided powers above ell are not stored")
    g = M.E if gen == "E" else M.F
    return g.power(a).scale(field.quantum_factorial(a).inverse())


def tensor_module(M: UModule, N: UModule) -> UModule:
    """M tensor N with the comultiplication action on divided powers."""
    if M.field is not N.field:
        raise MismatchedFieldError("tensor factors over different ell")
    field = M.field
    ell = field.ell
    weights = tuple(wm + wn for wm in M.weights for wn in N.weights)
    idN = ExactMatrix.identity(field, N.dim)
    idM = ExactMatrix.identity(field, M.dim)
    K = M.K.kron(N.K)
    E = M.E.kron(idN) + M.K.kron(N.E)
    F = M.F.kron(N.k_power(-1)) + idM.kron(N.F)
    El = ExactMatrix(field, M.dim * N.dim, M.dim * N.dim)
    Fl = ExactMatrix(field, M.dim * N.dim, M.dim * N.dim)
    for a in range(ell + 1):
        b = ell - a
        ca = field.zeta_power(a * b)
        left = divided_power(M, "E", a) @ M.k_power(b)
        El = El + left.kron(divided_power(N, "E", b)).scale(ca)
        cb = field.zeta_power(-(a * b))
        right = N.k_power(-a) @ divided_power(N, "F", b)
        Fl = Fl + divided_power(M, "F", a).kron(right).scale(cb)
    return UModule(field, weights, K, E, F, El, Fl)


def dual_module(M: UModule) -> UModule:
    """Dual action through the antipode; K^ell = 1 on type-one modules."""
    field = M.field
    weights = tuple(-w for w in M.weights)
    Kd = ExactMatrix(field, M.dim, M.dim)
    for i, w in enumerate(weights):
        Kd.data[i][i] = field.zeta_power(w)
    Kinv = M.k_power(-1)
    Ed = -(Kinv @ M.E).transpose()
    Fd = -(M.F @ M.K).transpose()
    Eld = -M.El.transpose()
    Fld = -M.Fl.transpose()
    return UModule(field, weights, Kd, Ed, Fd, Eld, Fld)


def frobenius_twist(field: CycloField, a: int) -> UModule:
    """Pullback of the (a+1)-dimensional classical simple through Frobenius."""
    if a < 0:
        raise ValueError("highest weight must be nonnegative")
    ell = field.ell
    dim = a + 1
    weights = tuple(ell * (a - 2 * i) for i in range(dim))
    K = ExactMatrix(field, dim, dim)
    for i, w in enumerate(weights):
        K.data[i][i] = field.zeta_power(w)
    z = ExactMatrix(field, dim, dim)
    El = ExactMatrix(field, dim, dim)
    Fl = ExactMatrix(field, dim, dim)
    for i in range(dim):
        if i + 1 < dim:
            Fl.data[i + 1][i] = field.scalar(i + 1)
        if i - 1 >= 0:
            El.data[i - 1][i] = field.scalar(a - i + 1)
    return UModule(field, weights, K, z, z.copy(), El, Fl)


def direct_sum(*summands: UModule) -> UModule:
    if not summands:
        raise ValueError("need at least one summand")
    field = summands[0].field
    for s in summands[1:]:
        if s.field is not field:
            raise MismatchedFieldError("summands over different ell")
    weights = tuple(w for s in summands for w in s.weights)
    mats = {}
    for name in ("K", "E", "F", "El", "Fl"):
        mats[name] = ExactMatrix.block_diagonal(
            field, [getattr(s, name) for s in summands]
        )
    return UModule(field, weights, mats["K"], mats["E"], mats["F"], mats["El"], mats["Fl"])


# ---------------------------------------------------------------------------
# weight-block echelon machinery for submodules / quotients


class _WeightEchelon:
    """Per-weight echelon basis of a subspace spanned by homogeneous vectors."""

    def __init__(self, module: UModule):
        self.module = module
        self.blocks = module.weight_blocks()
        self.ech = {m: [] for m in self.blocks}  # m -> list of (pivot, compressed vec)

    def reduce(self, m, vec):
        """Reduce a compressed weight-m vector; returns residual (mutates copy)."""
        vec = list(vec)
        for pivot, basis_vec in self.ech.get(m, []):
            c = vec[pivot]
            if not c.is_zero():
                for k in range(pivot, len(vec)):
                    if not basis_vec[k].is_zero():
                        vec[k] = vec[k] - c * basis_vec[k]
        return vec

    def insert(self, m, vec):
        """Insert if independent; returns True if the span grew (RREF kept)."""
        vec = self.reduce(m, vec)
        pivot = None
        for k, v in enumerate(vec):
            if not v.is_zero():
                pivot = k
                break
        if pivot is None:
            return False
        inv = vec[pivot].inverse()
        vec = [inv * v for v in vec]
        row = self.ech.setdefault(m, [])
        for i, (p, bv) in enumerate(row):
            c = bv[pivot]
            if not c.is_zero():
                row[i] = (p, [bv[k] - c * vec[k] for k in range(len(bv))])
        row.append((pivot, vec))
        row.sort(key=lambda t: t[0])
        return True

    def coefficients(self, m, vec):
        """Express a compressed weight-m vector in the echelon basis.

        Returns (coeffs list aligned with self.ech[m], residual-is-zero flag).
        """
        vec = list(vec)
        coeffs = []
        for pivot, basis_vec in self.ech.get(m, []):
            c = vec[pivot]
            coeffs.append(c)
            if not c.is_zero():
                for k in range(pivot, len(vec)):
                    if not basis_vec[k].is_zero():
                        vec[k] = vec[k] - c * basis_vec[k]
        return coeffs, all(v.is_zero() for v in vec)

    def total_dim(self):
        return sum(len(v) for v in self.ech.values())


def _homogeneous_components(M: UModule, dense_vec):
    """Split a dense coordinate vector into (weight, compressed coords) parts."""
    blocks = M.weight_blocks()
    out = []
    for m, idx in blocks.items():
        comp = [dense_vec[i] for i in idx]
        if any(not c.is_zero() for c in comp):
            out.append((m, comp))
    return out


def _apply_block(M: UModule, gen_name, m, comp):
    """Apply a generator to a compressed weight-m vector; returns (m', comp')."""
    shift = dict(_shifts(M.field.ell))[gen_name]
    blocks = M.weight_blocks()
    src = blocks.get(m, [])
    tgt = blocks.get(m + shift, [])
    if not tgt:
        return None
    g = getattr(M, gen_name)
    out = [M.field.zero] * len(tgt)
    for b, c in enumerate(src):
        v = comp[b]
        if v.is_zero():
            continue
        for a, r in enumerate(tgt):
            gv = g.data[r][c]
            if not gv.is_zero():
                out[a] = out[a] + gv * v
    if all(x.is_zero() for x in out):
        return None
    return (m + shift, out)


def submodule_generated(M: UModule, dense_vectors, close: bool = True):
    """Smallest generator-stable subspace containing the vectors.

    Returns (S, inclusion).  With close=False the span must already be stable
    (images and kernels of intertwiners); stability is still verified when the
    induced action is computed.
    """
    ech = _WeightEchelon(M)
    work = []
    for vec in dense_vectors:
        if len(vec) != M.dim:
            raise ValueError(f"vector of length {len(vec)} does not lie in dim-{M.dim} module")
        for m, comp in _homogeneous_components(M, vec):
            if ech.insert(m, list(comp)):
                work.append((m, comp))
    if close:
        # worklist closure under the four ladder generators
        queue = list(work)
        while queue:
            m, comp = queue.pop()
            for name, _ in _shifts(M.field.ell):
                res = _apply_block(M, name, m, comp)
                if res is None:
                    continue
                m2, comp2 = res
                if ech.insert(m2, comp2):
                    queue.append((m2, comp2))
    return _subspace_to_module(M, ech)


def _subspace_to_module(M: UModule, ech: _WeightEchelon):
    field = M.field
    blocks = M.weight_blocks()
    basis = []  # (weight, compressed vec) in deterministic order
    for m in sorted(ech.ech, reverse=True):
        for pivot, vec in ech.ech[m]:
            basis.append((m, vec))
    sdim = len(basis)
    weights = tuple(m for m, _ in basis)
    incl = ExactMatrix(field, M.dim, sdim)
    for j, (m, vec) in enumerate(basis):
        for b, i in enumerate(blocks[m]):
            incl.data[i][j] = vec[b]
    # induced action: solve within each weight block using the echelon
    mats = {name: ExactMatrix(field, sdim, sdim) for name in ("E", "F", "El", "Fl")}
    pos_by_weight = {}
    for j, (m, _) in enumerate(basis):
        pos_by_weight.setdefault(m, []).append(j)
    for j, (m, vec) in enumerate(basis):
        for name, shift in _shifts(field.ell):
            res = _apply_block(M, name, m, vec)
            if res is None:
                continue
            m2, comp2 = res
            coeffs, ok = ech.coefficients(m2, comp2)
            if not ok:
                raise ValueError("subspace is not stable under the generators")
            for t, c in zip(pos_by_weight.get(m2, []), coeffs):
                mats[name].data[t][j] = c
    K = ExactMatrix(field, sdim, sdim)
    for j, w in enumerate(weights):
        K.data[j][j] = field.zeta_power(w)
    S = UModule(field, weights, K, mats["E"], mats["F"], mats["El"], mats["Fl"])
    return S, UMorphism(S, M, incl)


def quotient_module(M: UModule, inclusion: UMorphism):
    """Quotient of M by the image of an injective inclusion of a submodule.

    Returns (Q, projection) with projection o inclusion = 0.
    """
    if inclusion.target is not M:
        raise ValueError("inclusion does not land in the module")
    field = M.field
    blocks = M.weight_blocks()
    S = inclusion.source
    ech = _WeightEchelon(M)
    count = 0
    for j in range(S.dim):
        vec = inclusion.matrix.column(j)
        parts = _homogeneous_components(M, vec)
        if len(parts) > 1:
            raise ValueError("inclusion columns must be weight-homogeneous")
        for m, comp in parts:
            if ech.insert(m, comp):
                count += 1
    if count != S.dim:
        raise ValueError("inclusion is not injective")
    # complement positions per weight: coordinates that are not pivots
    basis = []  # (weight, position within block)
    for m in sorted(blocks, reverse=True):
        pivots = {p for p, _ in ech.ech.get(m, [])}
        for b in range(len(blocks[m])):
            if b not in pivots:
                basis.append((m, b))
    qdim = len(basis)
    weights = tuple(m for m, _ in basis)
    # projection: reduce each ambient basis vector, read complement coords
    proj = ExactMatrix(field, qdim, M.dim)
    pos = {(m, b): r for r, (m, b) in enumerate(basis)}
    for m, idx in blocks.items():
        n = len(idx)
        for b, i in enumerate(idx):
            unit = [field.zero] * n
            unit[b] = field.one
            red = ech.reduce(m, unit)
            for bb in range(n):
                r = pos.get((m, bb))
                if r is not None and not red[bb].is_zero():
                    proj.data[r][i] = red[bb]
    # section: complement unit vectors as ambient columns
    sect = ExactMatrix(field, M.dim, qdim)
    for r, (m, b) in enumerate(basis):
        sect.data[blocks[m][b]][r] = field.one
    mats = {}
    for name in ("E", "F", "El", "Fl"):
        g = getattr(M, name)
        if not (proj @ g @ inclusion.matrix).is_zero():
            raise ValueError(f"subspace is not stable under {name}; quotient undefined")
        mats[name] = proj @ g @ sect
    K = ExactMatrix(field, qdim, qdim)
    for r, w in enumerate(weights):
        K.data[r][r] = field.zeta_power(w)
    Q = UModule(field, weights, K, mats["E"], mats["F"], mats["El"], mats["Fl"])
    pr = UMorphism(M, Q, proj)
    if not (proj @ inclusion.matrix).is_zero():
        raise ValueError("projection does not kill the submodule")
    return Q, pr


def image_module(phi: UMorphism):
    """Image of an intertwiner as a submodule of the target."""
    cols = [phi.matrix.column(j) for j in range(phi.matrix.cols)]
    return submodule_generated(phi.target, cols, close=False)


def kernel_module(phi: UMorphism):
    """Kernel of an intertwiner as a submodule of the source."""
    M, N = phi.source, phi.target
    field = M.field
    mb = M.weight_blocks()
    nb = N.weight_blocks()
    vectors = []
    for m, idx in mb.items():
        tgt = nb.get(m, [])
        block = ExactMatrix(field, len(tgt), len(idx))
        for a, r in enumerate(tgt):
            for b, c in enumerate(idx):
                block.data[a][b] = phi.matrix.data[r][c]
        ker = block.kernel()
        for j in range(ker.cols):
            dense = [field.zero] * M.dim
            for b, i in enumerate(idx):
                dense[i] = ker.data[b][j]
            vectors.append(dense)
    return submodule_generated(M, vectors, close=False)


# ---------------------------------------------------------------------------
# Hom spaces


def hom_space(M: UModule, N: UModule):
    """Basis of Hom_U(M, N) as a list of UMorphism.

    An intertwiner preserves weights, so the unknowns are the per-weight
    blocks; the four ladder generators give a banded sparse system.
    """
    if M.field is not N.field:
        raise MismatchedFieldError("hom between modules over different ell")
    field = M.field
    mb = M.weight_blocks()
    nb = N.weight_blocks()
    shared = sorted(set(mb) & set(nb), reverse=True)
    var_ids = {}
    for m in shared:
        for r in nb[m]:
            for c in mb[m]:
                var_ids[(r, c)] = len(var_ids)
    if not var_ids:
        return []
    sys = SparseSystem(field, len(var_ids))
    gens = _shifts(field.ell)
    for name, shift in gens:
        gM = getattr(M, name)
        gN = getattr(N, name)
        for m in mb:
            m2 = m + shift
            rows_n2 = nb.get(m2, [])
            cols_m2 = mb.get(m2, [])
            for rp in rows_n2:
                for c in mb[m]:
                    entries = {}
                    # (X gM)[rp, c]
                    for cp in cols_m2:
                        v = gM.data[cp][c]
                        key = var_ids.get((rp, cp))
                        if key is not None and not v.is_zero():
                            entries[key] = entries.get(key, field.zero) + v
                    # -(gN X)[rp, c]
                    for r in nb.get(m, []):
                        v = gN.data[rp][r]
                        key = var_ids.get((r, c))
                        if key is not None and not v.is_zero():
                            entries[key] = entries.get(key, field.zero) - v
                    if entries:
                        sys.add_row(entries)
    basis = sys.kernel_basis()
    id_items = sorted(var_ids.items(), key=lambda kv: kv[1])
    out = []
    for vec in basis:
        mat = ExactMatrix(field, N.dim, M.dim)
        for (r, c), k in id_items:
            v = vec[k]
            if not v.is_zero():
                mat.data[r][c] = v
        out.append(UMorphism(M, N, mat))
    return out


def find_isomorphism(M: UModule, N: UModule, attempts: int = 40):
    """An invertible intertwiner M -> N, or None.

    Characters are compared first; then basis elements and seeded small
    integer combinations of the Hom basis are tried.
    """
    if M.dim != N.dim or M.character != N.character:
        return None
    if M.dim == 0:
        return UMorphism.zero(M, N)
    homs = hom_space(M, N)
    if not homs:
        return None
    for h in homs:
        if not h.matrix.determinant().is_zero():
            return h
    import random

    rng = random.Random(20240 + M.dim + 31 * N.dim)
    field = M.field
    for _ in range(attempts):
        mat = ExactMatrix(field, N.dim, M.dim)
        for h in homs:
            c = field.scalar(rng.randint(-3, 3))
            mat = mat + h.matrix.scale(c)
        if not mat.determinant().is_zero():
            return UMorphism(M, N, mat)
    return None


def infer_weights(field: CycloField, K, E, F, El, Fl):
    """Recover the integer weight of each basis vector from the matrices alone.

    Works for weight-homogeneous bases: the residue mod ell comes from K and
    the classical part from the torus binomial of depth ell, expressed through
    the stored generators.  Serves as an independent cross-check of the
    weights carried by constructors.
    """
    ell = field.ell
    dim = K.rows
    # residues from the diagonal of K
    residues = []
    for i in range(dim):
        entry = K.data[i][i]
        r = next((k for k in range(ell) if field.zeta_power(k) == entry), None)
        if r is None:
            raise ValueError(f"K[{i},{i}] is not a power of zeta")
        residues.append(r)
    # depth-ell torus binomial through the commutator of the divided powers
    comm = (El @ Fl) - (Fl @ El)
    fact_cache = {}

    def dp(g, a):
        key = (id(g), a)
        if key not in fact_cache:
            fact_cache[key] = g.power(a).scale(field.quantum_factorial(a).inverse())
        return fact_cache[key]

    correction = ExactMatrix(field, dim, dim)
    for t in range(1, ell):
        # middle factor is a Laurent polynomial in K, valued via residues
        mid = ExactMatrix(field, dim, dim)
        for i in range(dim):
            mid.data[i][i] = field.binomial_k_operator_value(residues[i], 2 * t - 2 * ell, t)
        term = dp(F, ell - t) @ mid @ dp(E, ell - t)
        correction = correction + term
    h_mat = comm - correction
    weights = []
    for i in range(dim):
        val = h_mat.data[i][i].rational_value()
        if val is None or val.denominator != 1:
            raise ValueError("torus operator is not integer-diagonal; basis not homogeneous")
        weights.append(residues[i] + ell * int(val))
    # in a homogeneous basis the operator must be diagonal
    for i in range(dim):
        for j in range(dim):
            if i != j and not h_mat.data[i][j].is_zero():
                # off-diagonal entries may only connect equal weights
                if weights[i] != weights[j]:
                    raise ValueError("torus operator mixes distinct weights")
    return tuple(weights)
