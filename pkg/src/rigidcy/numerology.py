"""Jordan-form bookkeeping: how Jordan types move under middle
convolution and middle Hadamard products, centralizer dimensions in
GL_n and Sp_4, the Lambda^2 map Sp_4 -> SO_5 on Jordan types, and the
enumeration of Sp_4-rigid centralizer profiles with automatic verdicts.

Jordan types are exactalg.JordanForm values; eigenvalues may carry
generic symbols (x, y, ...) standing for roots of unity in general
position.
"""

from fractions import Fraction
from itertools import combinations_with_replacement, product
import re

from .exactalg import JordanForm, RootOfUnity

ONE = RootOfUnity(0)
MINUS_ONE = RootOfUnity(Fraction(1, 2))


class NegativeFiller(ValueError):
    pass


class NotSymplecticClass(ValueError):
    pass


# ---------------------------------------------------------------------------
# parsing and printing Jordan types

_FACTOR = re.compile(r"\s*(e\((-?\d+(?:/\d+)?)\)|i|[a-hk-z]\w*)(?:\^(-?\d+))?\s*")


def parse_eigenvalue(text):
    """'-x^-1*y', 'i', 'e(1/5)', '1', '-1' -> RootOfUnity."""
    s = text.strip()
    exponent = Fraction(0)
    syms = []
    if s.startswith("-"):
        exponent += Fraction(1, 2)
        s = s[1:].strip()
    if s in ("", "1"):
        return RootOfUnity(exponent)
    for part in s.split("*"):
        m = _FACTOR.fullmatch(part)
        if not m:
            raise ValueError("cannot parse eigenvalue %r" % text)
        power = int(m.group(3)) if m.group(3) else 1
        if m.group(2) is not None:
            exponent += Fraction(m.group(2)) * power
        elif m.group(1) == "i":
            exponent += Fraction(power, 4)
        else:
            syms.append((m.group(1), power))
    return RootOfUnity(exponent, syms)


def _split_top(s):
    parts, depth, cur = [], 0, ""
    for c in s:
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
        if c == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += c
    parts.append(cur)
    return [p.strip() for p in parts]


_BLOCK = re.compile(r"^(.*?)\*?J\((\d+)\)$")


def parse_jordan(text):
    """'(x*J(2),x^-1*J(2))', 'J(4)', '(-1,-1,1,1)', '-J(4)' -> JordanForm."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")") and _balanced(s[1:-1]):
        s = s[1:-1]
    blocks = []
    for item in _split_top(s):
        m = _BLOCK.match(item.replace(" ", ""))
        if m:
            pre = m.group(1)
            eig = parse_eigenvalue(pre if pre not in ("", "-") else pre + "1")
            blocks.append((eig, int(m.group(2)), 1))
        else:
            blocks.append((parse_eigenvalue(item), 1, 1))
    return JordanForm(blocks)


def _balanced(s):
    depth = 0
    for c in s:
        depth += c == "("
        depth -= c == ")"
        if depth < 0:
            return False
    return depth == 0


# ---------------------------------------------------------------------------
# middle convolution / Hadamard numerology

def _rank_minus(form, eig):
    return form.dim - form.geometric(eig)


def mc_jordan(forms, lam):
    """Jordan types of MC_lam(T) from those of T (last entry at infinity).

    Returns (new_forms, fillers) where fillers[i] is the number of
    trivial blocks added to entry i."""
    if lam.is_one():
        raise ValueError("mc_jordan needs lambda != 1")
    forms = list(forms)
    n = forms[0].dim
    inv = lam.inverse()
    finite, last = forms[:-1], forms[-1]
    new_rank = (sum(_rank_minus(f, ONE) for f in finite)
                + _rank_minus(last, lam) - n)
    out, fillers = [], []
    for idx, f in enumerate(forms):
        blocks = []
        if idx < len(forms) - 1:
            for e, s, m in f.blocks:
                if e == ONE:
                    if s >= 2:
                        blocks.append((lam, s - 1, m))
                elif e == inv:
                    blocks.append((ONE, s + 1, m))
                else:
                    blocks.append((lam * e, s, m))
            filler_eig = ONE
        else:
            for e, s, m in f.blocks:
                if e == lam:
                    if s >= 2:
                        blocks.append((ONE, s - 1, m))
                elif e == ONE:
                    blocks.append((inv, s + 1, m))
                else:
                    blocks.append((inv * e, s, m))
            filler_eig = inv
        size = sum(s * m for _, s, m in blocks)
        k = new_rank - size
        if k < 0:
            raise NegativeFiller("entry %d needs %d filler blocks" % (idx, k))
        if k:
            blocks.append((filler_eig, 1, k))
        out.append(JordanForm(blocks))
        fillers.append(k)
    return out, fillers


def mt_jordan(forms, scalars):
    """Jordan types after tensoring entrywise with a rank-one tuple."""
    return [f.scaled(s) for f, s in zip(forms, scalars)]


def mh_jordan(forms, lam, zero_index=0):
    """Jordan types of MH_lam(T).  forms[zero_index] sits at 0, the last
    entry at infinity.

    Derived as MC_lam of the tensor product with (lam^-1, lam) at
    (0, inf): eigenvalues at 0 other than 1 and lam stay put, blocks at
    1 grow, blocks at lam shrink; finite entries away from 0 follow the
    middle convolution rule; infinity as in the convolution rule after
    the shift by lam."""
    forms = list(forms)
    scal = [ONE] * len(forms)
    scal[zero_index] = lam.inverse()
    scal[-1] = lam
    return mc_jordan(mt_jordan(forms, scal), lam)


def mc_rank(forms, lam):
    n = forms[0].dim
    return sum(_rank_minus(f, ONE) for f in forms[:-1]) + _rank_minus(forms[-1], lam) - n


# ---------------------------------------------------------------------------
# centralizers and the Lambda^2 map

def centralizer_dim_gl(form):
    return form.centralizer_dim_gl()


def _check_symplectic(form):
    for eig in form.eigenvalues():
        if form.at(eig) != form.at(eig.inverse()):
            raise NotSymplecticClass("%s: eigenvalue %s not paired with its inverse"
                                     % (form, eig))
        if eig in (ONE, MINUS_ONE):
            for s, m in form.at(eig).items():
                if s % 2 and m % 2:
                    raise NotSymplecticClass("%s: odd block at %s with odd multiplicity"
                                             % (form, eig))


def centralizer_dim_sp4(form):
    """dim C_Sp(g) for g of the given Jordan type.

    Eigenvalue pairs rho != rho^-1 contribute the GL count of the rho
    part; rho = +-1 contributes (sum min(j,k) v_j v_k + #odd blocks) / 2."""
    if form.dim != 4:
        raise NotSymplecticClass("not a rank 4 Jordan type: %s" % form)
    _check_symplectic(form)
    total = 0
    seen = set()
    for eig in form.eigenvalues():
        if eig in seen:
            continue
        sizes = form.at(eig)
        gl = sum(min(j, k) * v * w for j, v in sizes.items() for k, w in sizes.items())
        if eig in (ONE, MINUS_ONE):
            odd = sum(v for j, v in sizes.items() if j % 2)
            total += (gl + odd) // 2
            seen.add(eig)
        else:
            total += gl
            seen.add(eig)
            seen.add(eig.inverse())
    return total


def _tensor_blocks(m, n):
    lo, hi = min(m, n), max(m, n)
    return [lo + hi + 1 - 2 * k for k in range(1, lo + 1)]


def _ext2_block(n):
    return [2 * n - 3 - 4 * k for k in range(n) if 2 * n - 3 - 4 * k > 0]


def ext2_full(form):
    """Jordan type of Lambda^2 g."""
    singles = []
    for e, s, m in form.blocks:
        singles.extend([(e, s)] * m)
    out = []
    for i, (e, s) in enumerate(singles):
        for size in _ext2_block(s):
            out.append((e * e, size, 1))
        for f, t in singles[i + 1:]:
            for size in _tensor_blocks(s, t):
                out.append((e * f, size, 1))
    return JordanForm(out)


def ext2_jordan(form):
    """Sp_4 Jordan type -> SO_5 Jordan type on the primitive part of
    Lambda^2 (one trivial block removed)."""
    if form.dim != 4:
        raise NotSymplecticClass("not a rank 4 Jordan type: %s" % form)
    _check_symplectic(form)
    full = ext2_full(form)
    blocks = [list(b) for b in full.blocks]
    for b in blocks:
        if b[0] == ONE and b[1] == 1:
            b[2] -= 1
            break
    else:
        raise NotSymplecticClass("no trivial summand in Lambda^2 of %s" % form)
    return JordanForm([tuple(b) for b in blocks])


# ---------------------------------------------------------------------------
# Table 1: Jordan types in Sp_4 with their SO_5 image and centralizers

# (Sp_4 type, signs allowed, SO_5 type, dim C_Sp4, dim C_GL4, condition)
TABLE1 = [
    ("(1,1,1,1)", True, "(1,1,1,1,1)", 10, 16, ""),
    ("(J(2),1,1)", True, "(J(2),J(2),1)", 6, 10, ""),
    ("(J(2),J(2))", True, "(J(3),1,1)", 4, 8, ""),
    ("J(4)", True, "J(5)", 2, 4, ""),
    ("(-1,-1,1,1)", False, "(-1,-1,-1,-1,1)", 6, 8, ""),
    ("(-J(2),1,1)", True, "(-J(2),-J(2),1)", 4, 6, ""),
    ("(-J(2),J(2))", False, "(-J(3),-1,1)", 2, 4, ""),
    ("(x,x,x^-1,x^-1)", False, "(x^2,1,1,1,x^-2)", 4, 8, "x^2 != 1"),
    ("(x,1,1,x^-1)", False, "(x,x,1,x^-1,x^-1)", 4, 6, "x^2 != 1"),
    ("(x*J(2),x^-1*J(2))", False, "(J(3),x^2,x^-2)", 2, 4, "x^2 != 1"),
    ("(x,x^-1,J(2))", False, "(x*J(2),x^-1*J(2),1)", 2, 4, "x^2 != 1"),
    ("(x,y,y^-1,x^-1)", False, "(x*y,x*y^-1,1,x^-1*y,x^-1*y^-1)", 2, 4,
     "x^2, y^2 != 1, x != y^+-1"),
]


def table1_rows():
    """Table 1 rows as dicts with parsed Jordan types."""
    rows = []
    for sp, signed, so5, dsp, dgl, cond in TABLE1:
        rows.append({"sp4": sp, "signed": signed, "so5": so5,
                     "form": parse_jordan(sp), "so5_form": parse_jordan(so5),
                     "dim_sp4": dsp, "dim_gl4": dgl, "condition": cond})
    return rows


def _rename(form, suffix):
    return JordanForm([(RootOfUnity(e.exponent, [(s + suffix, k) for s, k in e.symbols]),
                        size, m) for e, size, m in form.blocks])


def class_forms(dim_sp, dim_gl, suffix=""):
    """Representatives of every Table 1 type with the given centralizer
    dimensions; generic symbols get the suffix so slots stay independent."""
    out = []
    for row in table1_rows():
        if row["dim_sp4"] != dim_sp or row["dim_gl4"] != dim_gl:
            continue
        f = _rename(row["form"], suffix)
        out.append(f)
        if row["signed"]:
            out.append(f.scaled(MINUS_ONE))
    return out


# ---------------------------------------------------------------------------
# Table 2: profiles and verdicts

TABLE2 = [
    ("P1", (2, 2, 6), [((4, 4, 10), "lin. rigid"), ((4, 4, 8), "Λ² lin. rigid")]),
    ("P2", (2, 4, 4), [((4, 6, 6), ""), ((4, 6, 8), "lin. rigid"),
                       ((4, 8, 8), "red. (dimension count)")]),
    ("P3", (2, 6, 6, 6), [((4, 10, 10, 10), "red. (Scott)"), ((4, 8, 10, 10), ""),
                          ((4, 8, 8, 10), "Λ² red."), ((4, 8, 8, 8), "Λ² red.")]),
    ("P4", (4, 4, 6, 6), [((8, 8, 10, 10), "red. (dimension count)"),
                          ((6, 8, 10, 10), "lin. rigid"), ((6, 6, 10, 10), ""),
                          ((8, 8, 8, 10), "lin. rigid"), ((6, 8, 8, 10), ""),
                          ((6, 6, 8, 10), "Λ² red."), ((8, 8, 8, 8), "Λ² red."),
                          ((6, 8, 8, 8), "Λ² red."), ((6, 6, 8, 8), "Λ² lin. rigid")]),
    ("P5", (6, 6, 6, 6, 6), [((10, 10, 10, 10, 10), "lin. rigid"),
                             ((8, 10, 10, 10, 10), "red. (Scott)"),
                             ((8, 8, 10, 10, 10), "red. (Scott)"),
                             ((8, 8, 8, 10, 10), "Λ² lin. rigid"),
                             ((8, 8, 8, 8, 10), "Λ² red."),
                             ((8, 8, 8, 8, 8), "Λ² red.")]),
]

REDUCIBLE = {"red. (Scott)", "red. (dimension count)", "Λ² red."}


def sp4_profiles():
    """All sorted tuples of Sp_4 centralizer dimensions of non-central
    classes whose codimensions (10 - dim) add up to 20."""
    dims = sorted({row["dim_sp4"] for row in table1_rows() if row["dim_sp4"] < 10})
    out = []
    for length in range(3, 21):
        for combo in combinations_with_replacement(dims, length):
            if sum(10 - d for d in combo) == 20:
                out.append(combo)
    return sorted(out, key=lambda p: (len(p), p))


def gl_options(dim_sp):
    return sorted({row["dim_gl4"] for row in table1_rows() if row["dim_sp4"] == dim_sp})


def subcases(profile):
    """GL_4 refinements, sorted within each block of equal Sp_4 dims."""
    groups = []
    for d in profile:
        if groups and groups[-1][0] == d:
            groups[-1][1] += 1
        else:
            groups.append([d, 1])
    choices = [list(combinations_with_replacement(gl_options(d), k)) for d, k in groups]
    out = []
    for pick in product(*choices):
        out.append(tuple(x for part in pick for x in part))
    return out


def _sign_twists(count):
    for signs in product((1, -1), repeat=count):
        if signs.count(-1) % 2 == 0:
            yield signs


def _twisted_rank(form, sign):
    eig = ONE if sign == 1 else MINUS_ONE
    return form.dim - form.geometric(eig)


def scott_reducible(forms):
    """True if some sign twist (product 1) violates sum rk(mu T - 1) >= 2n."""
    n = forms[0].dim
    for signs in _sign_twists(len(forms)):
        if sum(_twisted_rank(f, s) for f, s in zip(forms, signs)) < 2 * n:
            return True
    return False


def dimension_count(forms):
    """(sum dim C_GL, (r-1) n^2 + 2)."""
    n = forms[0].dim
    r = len(forms) - 1
    return sum(f.centralizer_dim_gl() for f in forms), (r - 1) * n * n + 2


def candidate_tuples(profile, sub):
    slots = []
    for idx, (dsp, dgl) in enumerate(zip(profile, sub)):
        slots.append(class_forms(dsp, dgl, suffix=str(idx + 1)))
    return [list(c) for c in product(*slots)]


def _ext2_verdict(cands):
    labels = set()
    for c in cands:
        images = [ext2_jordan(f) for f in c]
        if scott_reducible(images):
            labels.add("Λ² red.")
            continue
        total, bound = dimension_count(images)
        if total > bound:
            labels.add("Λ² red.")
        elif total == bound:
            labels.add("Λ² lin. rigid")
        else:
            labels.add("")
    return labels


def verdict(profile, sub):
    """Automatic verdict for one Table 2 subcase.

    Returns (label, detail).  label is one of the Table 2 remark strings,
    '' when no automated argument applies, or 'manual' when the
    candidate Jordan types disagree."""
    cands = candidate_tuples(profile, sub)
    survivors = [c for c in cands if not scott_reducible(c)]
    detail = {"candidates": len(cands), "scott_survivors": len(survivors)}
    if not survivors:
        return "red. (Scott)", detail
    total, bound = dimension_count(cands[0])
    detail["dim_sum"], detail["dim_bound"] = total, bound
    if total > bound:
        return "red. (dimension count)", detail
    if total == bound:
        return "lin. rigid", detail
    labels = _ext2_verdict(survivors)
    detail["ext2_labels"] = sorted(labels)
    if len(labels) == 1:
        return labels.pop(), detail
    return "manual", detail


def compare_verdict(auto, printed):
    """'match', 'manual' (flagged, not automated), 'consistent' (both say
    reducible, by different arguments) or 'mismatch'."""
    if auto == printed:
        return "match"
    if auto in ("manual", ""):
        return "manual"
    if printed == "":
        return "manual"
    if auto in REDUCIBLE and printed in REDUCIBLE:
        return "consistent"
    return "mismatch"


def enumerate_sp4_cases():
    """Table 2 reconstructed: one dict per (profile, subcase)."""
    golden = {(prof, sub): (case, remark) for case, prof, subs in TABLE2
              for sub, remark in subs}
    rows = []
    for prof in sp4_profiles():
        for sub in subcases(prof):
            case, remark = golden.get((prof, sub), (None, None))
            label, detail = verdict(prof, sub)
            rows.append({"case": case, "profile": prof, "subcase": sub,
                         "verdict": label, "printed": remark,
                         "status": compare_verdict(label, remark) if case else "extra",
                         "detail": detail})
    order = {}
    for _, prof, subs in TABLE2:
        for sub, _ in subs:
            order[(prof, sub)] = len(order)
    rows.sort(key=lambda r: order.get((r["profile"], r["subcase"]), 10 ** 6))
    return rows


def format_table1():
    lines = ["%-22s %-34s %5s %5s  %s" % ("Sp4", "SO5", "C_Sp", "C_GL", "conditions")]
    for row in table1_rows():
        label = ("±" if row["signed"] else "") + row["sp4"]
        lines.append("%-22s %-34s %5d %5d  %s" % (label, row["so5"], row["dim_sp4"],
                                                  row["dim_gl4"], row["condition"]))
    return "\n".join(lines)


def format_table2(rows):
    lines = ["%-4s %-18s %-20s %-24s %-24s %s" % ("case", "profile", "subcase", "verdict",
                                                  "printed", "status")]
    for r in rows:
        lines.append("%-4s %-18s %-20s %-24s %-24s %s" % (
            r["case"] or "-", str(r["profile"]), str(r["subcase"]), r["verdict"] or "-",
            r["printed"] or "-", r["status"]))
    return "\n".join(lines)
