"""Minimal tilting complexes.

The construction is a checked pipeline: (1) coresolve the module by sums of
indecomposable tiltings until the cokernel acquires a costandard filtration,
(2) resolve every term on the left by tiltings until kernels become tilting,
(3) assemble the columns into a twisted total complex whose square is
verified to vanish exactly, then (4) minimalize.  The result is certified by
recomputing cohomology: the source module in degree zero and nothing else.
"""

from __future__ import annotations

from tiltlab.complexes import ChainComplex, labeled_direct_sum, minimalize
from tiltlab.linalg import ExactMatrix, SparseSystem
from tiltlab.modules import (
    UModule,
    UMorphism,
    find_isomorphism,
    hom_space,
    image_module,
    kernel_module,
    quotient_module,
)
from tiltlab.standard import (
    decompose_indecomposables,
    peel_standard_filtration,
    tilting_module,
)

CORESOLUTION_CAP = 60
COLUMN_CAP = 60
WINDOW_MARGIN_FACTOR = 4  # search window grows up to margin * this


class WindowError(RuntimeError):
    """A search window was exhausted; never silently return a wrong complex."""


_cmin_cache: dict = {}


def _morphism_rank(phi: UMorphism) -> int:
    """Rank of an intertwiner, computed one weight block at a time."""
    mb = phi.source.weight_blocks()
    nb = phi.target.weight_blocks()
    field = phi.source.field
    total = 0
    for m, cols in mb.items():
        rows = nb.get(m, [])
        if not rows:
            continue
        block = ExactMatrix(field, len(rows), len(cols))
        for a, r in enumerate(rows):
            for b, c in enumerate(cols):
                block.data[a][b] = phi.matrix.data[r][c]
        total += block.rank()
    return total


def _stack_into_sum(field, component_homs, source):
    """Build M -> sum of targets from maps h_i: M -> T_i; returns (Q, emb, parts)."""
    labeled = [(("T", mu), h.target) for mu, h in component_homs]
    Q, parts = labeled_direct_sum(field, labeled)
    emb = ExactMatrix(field, Q.dim, source.dim)
    off = 0
    for _, h in component_homs:
        for r in range(h.target.dim):
            emb.data[off + r] = list(h.matrix.data[r])
        off += h.target.dim
    return Q, UMorphism(source, Q, emb), parts


def _stack_from_sum(field, component_homs, target):
    """Build sum of sources -> M from maps h_i: T_i -> M; returns (P, surj, parts)."""
    labeled = [(("T", mu), h.source) for mu, h in component_homs]
    P, parts = labeled_direct_sum(field, labeled)
    mat = ExactMatrix(field, target.dim, P.dim)
    off = 0
    for _, h in component_homs:
        for r in range(target.dim):
            row = mat.data[r]
            hrow = h.matrix.data[r]
            for c in range(h.source.dim):
                row[off + c] = hrow[c]
        off += h.source.dim
    return P, UMorphism(P, target, mat), parts


class _RankTracker:
    """Incremental rank of a growing set of vectors over Q(zeta)."""

    def __init__(self, field, n):
        self.field = field
        self.n = n
        self.rows = []  # reduced echelon rows (dense lists)
        self.pivots = []

    def rank(self):
        return len(self.rows)

    def add(self, vec) -> bool:
        vec = list(vec)
        for p, row in zip(self.pivots, self.rows):
            c = vec[p]
            if not c.is_zero():
                for k in range(p, self.n):
                    if not row[k].is_zero():
                        vec[k] = vec[k] - c * row[k]
        pivot = next((k for k, v in enumerate(vec) if not v.is_zero()), None)
        if pivot is None:
            return False
        inv = vec[pivot].inverse()
        vec = [inv * v for v in vec]
        self.rows.append(vec)
        self.pivots.append(pivot)
        return True


def _greedy_full_rank(field, components, M, into: bool):
    """Select components (small targets first) until the stacked map has
    rank dim M; returns the selection or None."""
    order = sorted(
        range(len(components)),
        key=lambda i: (
            (components[i][1].target.dim if into else components[i][1].source.dim),
            components[i][0],
            i,
        ),
    )
    tracker = _RankTracker(field, M.dim)
    chosen = []
    for i in order:
        mu, h = components[i]
        grew = False
        if into:
            vectors = h.matrix.data  # rows are functionals on M
        else:
            vectors = [h.matrix.column(j) for j in range(h.matrix.cols)]
        for v in vectors:
            if tracker.add(v):
                grew = True
        if grew:
            chosen.append((mu, h))
        if tracker.rank() == M.dim:
            return sorted(chosen, key=lambda c: -c[0])
    return None


def embed_into_tilting(M: UModule):
    """Injective morphism into a labeled direct sum of T(mu).

    The candidate window is max weight of M plus 2(ell-1), doubled on failure
    up to a hard cap; exhaustion raises WindowError with the attempted bound.
    """
    field = M.field
    ell = field.ell
    top = M.character.max_weight()
    if top is None:
        raise ValueError("cannot embed the zero module")
    margin = 2 * (ell - 1)
    attempt = margin
    while attempt <= margin * WINDOW_MARGIN_FACTOR:
        bound = top + attempt
        components = []
        for mu in range(bound, -1, -1):
            for h in hom_space(M, tilting_module(field, mu)):
                components.append((mu, h))
        chosen = _greedy_full_rank(field, components, M, into=True)
        if chosen is not None:
            return _stack_into_sum(field, chosen, M)
        attempt *= 2
    raise WindowError(
        f"no embedding of a dim-{M.dim} module into tiltings with highest "
        f"weight <= {top + margin * WINDOW_MARGIN_FACTOR}"
    )


def cover_by_tilting(M: UModule, approximating: bool = True):
    """Surjection onto M from a labeled direct sum of T(mu).

    With approximating=True the cover starts from the full Hom basis over the
    window, so that every morphism from a tilting module factors through it
    (then kernels of covers of costandard-filtered modules stay costandard
    filtered); components are only dropped when they factor through the rest,
    which preserves that property exactly.
    """
    field = M.field
    ell = field.ell
    top = M.character.max_weight()
    if top is None:
        raise ValueError("cannot cover the zero module")
    margin = 2 * (ell - 1)
    attempt = margin
    while attempt <= margin * WINDOW_MARGIN_FACTOR:
        bound = top + attempt
        components = []
        for mu in range(bound, -1, -1):
            for h in hom_space(tilting_module(field, mu), M):
                components.append((mu, h))
        if approximating:
            _, surj, _ = _stack_from_sum(field, components, M)
            if _morphism_rank(surj) == M.dim:
                components = _prune_factoring(field, components, M)
                return _stack_from_sum(field, components, M)
        else:
            chosen = _greedy_full_rank(field, components, M, into=False)
            if chosen is not None:
                return _stack_from_sum(field, chosen, M)
        attempt *= 2
    raise WindowError(
        f"no tilting cover of a dim-{M.dim} module with highest weight "
        f"<= {top + margin * WINDOW_MARGIN_FACTOR}"
    )


def _prune_factoring(field, components, M):
    """Drop cover components that factor through the remaining ones."""
    kept = list(components)
    order = sorted(
        range(len(kept)), key=lambda i: kept[i][1].source.dim, reverse=True
    )
    for i in order:
        rest = [kept[j] for j in range(len(kept)) if j != i and kept[j] is not None]
        if not rest:
            continue
        mu_i, h_i = kept[i]
        P_rest, surj_rest, _ = _stack_from_sum(field, rest, M)
        lift = _solve_chain_map(
            h_i.source, P_rest, surj_rest.matrix, h_i.matrix
        )
        if lift is not None:
            kept[i] = None
    return [c for c in kept if c is not None]


def _coresolution(M: UModule):
    """Terms and maps of 0 -> M -> X^0 -> X^1 -> ... with tilting terms and a
    costandard-filtered tail; returns (terms, parts_per_term, maps)."""
    field = M.field
    terms = []
    partlists = []
    maps = []  # maps[s]: X^s -> X^{s+1}
    C = M
    prev_proj = None  # X^{s-1} ->> C
    for _ in range(CORESOLUTION_CAP):
        if C.dim == 0:
            return terms, partlists, maps
        if peel_standard_filtration(C, "nabla") is not None:
            terms.append(C)
            partlists.append(None)  # resolved later by the column machinery
            if prev_proj is not None:
                maps.append(prev_proj)
            return terms, partlists, maps
        Q, emb, parts = embed_into_tilting(C)
        img, incl = image_module(emb)
        coker, proj = quotient_module(Q, incl)
        terms.append(Q)
        partlists.append(parts)
        if prev_proj is not None:
            maps.append(UMorphism(terms[-2], Q, emb.matrix @ prev_proj.matrix))
        C = coker
        prev_proj = proj
    raise WindowError(f"coresolution did not terminate within {CORESOLUTION_CAP} steps")


def _left_resolution(X: UModule, parts):
    """Column [P_(-r) -> ... -> P_0] with P_0 ->> X; all terms labeled tilting.

    Returns (term_list, part_list, inner_maps, augmentation) where term_list
    is indexed by t = 0, -1, ..., inner_maps[t]: term[t] -> term[t+1].
    """
    field = X.field
    if parts is not None:
        return [X], [parts], {}, UMorphism.identity(X)
    if peel_standard_filtration(X, "delta") is not None:
        # already tilting (it is costandard-filtered by construction)
        dec = decompose_indecomposables(X, tilting_only=True)
        return [X], [dec.parts], {}, UMorphism.identity(X)
    terms = []
    partl = []
    inner = {}
    P0, surj, p0parts = cover_by_tilting(X)
    terms.append(P0)
    partl.append(p0parts)
    aug = surj
    K, kincl = kernel_module(surj)
    t = 0
    while K.dim:
        t -= 1
        if -t > COLUMN_CAP:
            raise WindowError(f"left resolution did not terminate within {COLUMN_CAP} steps")
        if peel_standard_filtration(K, "nabla") is None:
            raise WindowError(
                "cover kernel lost its costandard filtration; approximation failed"
            )
        if peel_standard_filtration(K, "delta") is not None:
            dec = decompose_indecomposables(K, tilting_only=True)
            terms.append(K)
            partl.append(dec.parts)
            inner[t] = kincl
            break
        P, surj_k, pparts = cover_by_tilting(K)
        terms.append(P)
        partl.append(pparts)
        inner[t] = UMorphism(P, terms[-2], kincl.matrix @ surj_k.matrix)
        K, kincl = kernel_module(surj_k)
    # terms[0] is at t=0, terms[1] at t=-1, ...
    return terms, partl, inner, aug


def _solve_chain_map(src, tgt, left: ExactMatrix | None, rhs: ExactMatrix):
    """Particular intertwiner f: src -> tgt with left @ f = rhs (left=None: f = rhs fit).

    Returns the matrix of f, or None when inconsistent.
    """
    field = src.field
    mb = src.weight_blocks()
    nb = tgt.weight_blocks()
    shared = sorted(set(mb) & set(nb), reverse=True)
    var_ids = {}
    for m in shared:
        for r in nb[m]:
            for c in mb[m]:
                var_ids[(r, c)] = len(var_ids)
    sys = SparseSystem(field, max(1, len(var_ids)))
    # intertwiner equations
    from tiltlab.modules import _shifts

    for name, shift in _shifts(field.ell):
        gM = getattr(src, name)
        gN = getattr(tgt, name)
        for m in mb:
            m2 = m + shift
            for rp in nb.get(m2, []):
                for c in mb[m]:
                    entries = {}
                    for cp in mb.get(m2, []):
                        v = gM.data[cp][c]
                        key = var_ids.get((rp, cp))
                        if key is not None and not v.is_zero():
                            entries[key] = entries.get(key, field.zero) + v
                    for r in nb.get(m, []):
                        v = gN.data[rp][r]
                        key = var_ids.get((r, c))
                        if key is not None and not v.is_zero():
                            entries[key] = entries.get(key, field.zero) - v
                    if entries:
                        sys.add_row(entries)
    # constraint rows: (left @ f)[i, c] = rhs[i, c]
    nrows = left.rows if left is not None else tgt.dim
    for i in range(nrows):
        for c in range(src.dim):
            entries = {}
            if left is not None:
                for r in range(tgt.dim):
                    v = left.data[i][r]
                    key = var_ids.get((r, c))
                    if key is not None and not v.is_zero():
                        entries[key] = entries.get(key, field.zero) + v
            else:
                key = var_ids.get((i, c))
                if key is not None:
                    entries[key] = field.one
            target_val = rhs.data[i][c]
            if entries or not target_val.is_zero():
                sys.add_row(entries, target_val)
    sol = sys.particular_solution()
    if sol is None:
        return None
    mat = ExactMatrix(field, tgt.dim, src.dim)
    for (r, c), k in var_ids.items():
        v = sol[k]
        if not v.is_zero():
            mat.data[r][c] = v
    return mat


def tilting_complex_of(M: UModule, _certify: bool = True) -> ChainComplex:
    """A bounded complex of tiltings quasi-isomorphic to M (degree-0 cohomology)."""
    field = M.field
    if M.dim == 0:
        return ChainComplex.zero(field)
    terms, partlists, maps = _coresolution(M)
    columns = []
    for X, parts in zip(terms, partlists):
        columns.append(_left_resolution(X, parts))
    ncols = len(columns)
    # grid[(s, t)] modules and horizontal differentials inside columns
    grid = {}
    gparts = {}
    d0 = {}
    for s, (cterms, cparts, inner, aug) in enumerate(columns):
        for u, (tm, ps) in enumerate(zip(cterms, cparts)):
            grid[(s, -u)] = tm
            gparts[(s, -u)] = ps
        for t, mor in inner.items():
            d0[(s, t)] = mor.matrix
    # vertical lifts f1[(s, t)]: grid[(s,t)] -> grid[(s+1,t)]
    f1 = {}
    for s in range(ncols - 1):
        aug_s = columns[s][3]
        aug_s1 = columns[s + 1][3]
        d_s = maps[s]
        rhs0 = d_s.matrix @ aug_s.matrix
        sol = _solve_chain_map(grid[(s, 0)], grid[(s + 1, 0)], aug_s1.matrix, rhs0)
        if sol is None:
            raise WindowError(f"vertical lift at column {s}, level 0 is inconsistent")
        f1[(s, 0)] = sol
        t = 0
        while (s, t - 1) in grid:
            t -= 1
            if (s + 1, t) not in grid:
                # lift must compose to zero through the lower boundary
                comp = f1[(s, t + 1)] @ d0[(s, t)]
                if not comp.is_zero():
                    raise WindowError(f"vertical lift leaks below column {s + 1} at t={t}")
                break
            rhs = f1[(s, t + 1)] @ d0[(s, t)]
            sol = _solve_chain_map(grid[(s, t)], grid[(s + 1, t)], d0[(s + 1, t)], rhs)
            if sol is None:
                raise WindowError(f"vertical lift at column {s}, level {t} is inconsistent")
            f1[(s, t)] = sol
    # store D_1 with the sign twist (-1)^t
    comps = {}  # (k, s, t) -> matrix for D_k component at (s,t)
    for (s, t), mat in d0.items():
        comps[(0, s, t)] = mat
    for (s, t), mat in f1.items():
        comps[(1, s, t)] = mat if t % 2 == 0 else -mat
    # higher corrections D_k: (s,t) -> (s+k, t+1-k), solved layer by layer
    for k in range(2, ncols):
        layer = {}
        for s in range(ncols - k):
            for t in sorted((tt for (ss, tt) in grid if ss == s), reverse=True):
                # residual R = sum_{0<a<k} D_a D_{k-a} at (s,t), target (s+k, t+1-k)
                tgt_pos = (s + k, t + 1 - k)
                res = None
                for a in range(1, k):
                    b = k - a
                    mid = (s + b, t + 1 - b)
                    first = comps.get((b, s, t))
                    second = comps.get((a,) + mid)
                    if first is not None and second is not None:
                        term = second @ first
                        res = term if res is None else res + term
                # equation: D_0 X + (layer at (s, t+1)) D_0 + R = 0
                known = layer.get((s, t + 1))
                if known is not None and (0, s, t) in comps:
                    term = known @ comps[(0, s, t)]
                    res = term if res is None else res + term
                if res is None or res.is_zero():
                    continue
                if tgt_pos not in grid:
                    raise WindowError(
                        f"correction at column {s}, level {t} has nowhere to go"
                    )
                # unknown X: (s,t) -> tgt_pos with d0 (at tgt_pos) o X = -res
                left = comps.get((0,) + tgt_pos)
                if left is None:
                    raise WindowError(
                        f"correction at column {s}, level {t}: no differential at target"
                    )
                sol = _solve_chain_map(grid[(s, t)], grid[tgt_pos], left, -res)
                if sol is None:
                    raise WindowError(
                        f"correction at column {s}, level {t} is inconsistent"
                    )
                layer[(s, t)] = sol
        for (s, t), mat in layer.items():
            comps[(k, s, t)] = mat
    # assemble the total complex
    degsum = {}
    for (s, t), m in grid.items():
        if m.dim:
            degsum.setdefault(s + t, []).append((s, t, m))
    for n in degsum:
        degsum[n].sort(key=lambda x: x[0])
    tterms = {}
    tparts = {}
    slot = {}
    for n, blocks in degsum.items():
        total, ps = labeled_direct_sum(
            m.field if False else M.field, [(("grid", s, t), m) for s, t, m in blocks]
        )
        tterms[n] = total
        newparts = []
        for idx, (s, t, m) in enumerate(blocks):
            slot[(s, t)] = (n, idx)
            for q in gparts[(s, t)]:
                newparts.append(
                    type(q)(q.label, q.module,
                            ps[idx].inclusion.compose(q.inclusion),
                            q.projection.compose(ps[idx].projection))
                )
        tparts[n] = (ps, newparts)
    diffs = {}
    for n in sorted(tterms):
        if (n + 1) not in tterms:
            continue
        acc = ExactMatrix(M.field, tterms[n + 1].dim, tterms[n].dim)
        for s, t, m in degsum[n]:
            src = tparts[n][0][slot[(s, t)][1]]
            for k in range(ncols + 1):
                tgt_pos = (s + k, t + 1 - k)
                mat = comps.get((k, s, t))
                if mat is None or tgt_pos not in slot:
                    continue
                tgt = tparts[n + 1][0][slot[tgt_pos][1]]
                acc = acc + tgt.inclusion.matrix @ mat @ src.projection.matrix
        if not acc.is_zero():
            diffs[n] = UMorphism(tterms[n], tterms[n + 1], acc)
    fine_parts = {n: tparts[n][1] for n in tterms}
    out = ChainComplex(M.field, tterms, diffs, fine_parts)
    out.check()
    return out


class MinimalTiltingComplex:
    """Minimal bounded tilting complex with degree-zero cohomology the source."""

    def __init__(self, source: UModule, complex_: ChainComplex):
        self.source = source
        self.complex = complex_

    def label_table(self):
        return self.complex.tilting_label_table()

    def degrees(self):
        return self.complex.degrees()

    def __repr__(self):
        return f"MinimalTiltingComplex({self.label_table()})"


def minimal_tilting_complex(M: UModule, certify: bool = True) -> MinimalTiltingComplex:
    """C_min of M: constructed, minimalized, certified and cached."""
    key = (M.field.ell, M.fingerprint())
    if key in _cmin_cache:
        return _cmin_cache[key]
    field = M.field
    if M.dim == 0:
        result = MinimalTiltingComplex(M, ChainComplex.zero(field))
        _cmin_cache[key] = result
        return result
    if (
        peel_standard_filtration(M, "delta") is not None
        and peel_standard_filtration(M, "nabla") is not None
    ):
        dec = decompose_indecomposables(M, tilting_only=True)
        single = ChainComplex(field, {0: M}, {}, {0: dec.parts})
        result = MinimalTiltingComplex(M, single)
        _cmin_cache[key] = result
        return result
    big = tilting_complex_of(M)
    res = minimalize(big, tilting_only=True)
    cmin = res.complex
    if certify:
        _certify_cmin(M, cmin)
    result = MinimalTiltingComplex(M, cmin)
    _cmin_cache[key] = result
    return result


def _certify_cmin(M: UModule, cmin: ChainComplex):
    coh = cmin.cohomology()
    if set(coh) - {0}:
        raise ArithmeticError(f"minimal complex has cohomology in degrees {sorted(coh)}")
    h0 = coh.get(0)
    if M.dim == 0:
        if h0 is not None:
            raise ArithmeticError("expected acyclic complex for the zero module")
        return
    if h0 is None or h0.dim != M.dim or find_isomorphism(h0, M) is None:
        raise ArithmeticError("degree-zero cohomology is not the source module")


def filtration_dimensions(M: UModule):
    """(good filtration dimension, Weyl filtration dimension) from C_min."""
    c = minimal_tilting_complex(M).complex
    if c.is_zero():
        return (0, 0)
    return (max(0, c.max_degree), max(0, -c.min_degree))


def clear_cmin_cache():
    _cmin_cache.clear()
