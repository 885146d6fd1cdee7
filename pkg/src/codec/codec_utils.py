"""
The backward map phi_R (ordered tree -> offspring code along the succession line) and
the forward map psi_R (code -> component of 0 in the record graph of the code).

Index alignment, with u_0 = o and u_k = a^k(o), u_{-k} = b^k(o):

    vertices  u_{-2}   u_{-1}   u_0 = o   u_1
    code      y_{-3}   y_{-2}   y_{-1}    y_0      y_n = d_1(u_{n+1}) - 1

so y_n sits on the step into u_{n+1}, exactly where x_n sits between S_n and S_{n+1}.
"""

from typing import List, Optional

from codec.codec_types import (
    CensoredWindowError,
    CodecError,
    CodeSequence,
    FiniteCodeReport,
    RoundtripReport,
)
from increments import LawKind, TrajectoryWindow, fixed_window
from recorder import DEFAULT_RECORDER_CONFIG, RecorderConfig, component_ball
from trees import OrderedTree, a_map, b_map, parse, rls_sort


def _walk(t: OrderedTree, o: int, steps: int, forward: bool) -> List[int]:
    """Up to `steps` succession neighbours of o whose child counts are known."""
    out: List[int] = []
    v = o
    for _ in range(steps):
        nxt = a_map(t, v) if forward else b_map(t, v)
        if nxt is None or not t.children_known(nxt):
            break
        out.append(nxt)
        v = nxt
    return out


def _succession_line(t: OrderedTree, o: int, max_back: int, max_fwd: int) -> List[int]:
    """Resolved u_{-k}, ..., u_0 = o, ..., u_j in ascending order; empty if o is unresolved."""
    if not t.children_known(o):
        return []
    back = _walk(t, o, max_back, forward=False)
    return list(reversed(back)) + [o] + _walk(t, o, max_fwd, forward=True)


def resolved_code(t: OrderedTree, o: int, max_back: int, max_fwd: int) -> CodeSequence:
    """The longest resolved stretch of phi_R around o, at most max_back/max_fwd steps each way."""
    line = _succession_line(t, o, max_back, max_fwd)
    if not line:
        return CodeSequence(lo=0, values=())
    lo = -line.index(o) - 1
    return CodeSequence(lo=lo, values=tuple(t.out_degree(u) - 1 for u in line))


def phi_R(t: OrderedTree, o: int, n_back: int, n_fwd: int) -> CodeSequence:
    """y_n = d_1(u_{n+1}) - 1 for n in [-n_back - 1, n_fwd).

    Raises CensoredWindowError with the first code index that cannot be read.
    """
    if n_back < 0 or n_fwd < 0:
        raise CodecError(f"Window sizes must be >= 0, got {n_back}, {n_fwd}")
    code = resolved_code(t, o, n_back, n_fwd)
    if not code.values:
        raise CensoredWindowError(-1)
    if code.lo > -n_back - 1:
        raise CensoredWindowError(code.lo - 1)
    if code.hi < n_fwd:
        raise CensoredWindowError(code.hi)
    return code


def psi_R(
    y: CodeSequence,
    radius: Optional[int] = None,
    config: RecorderConfig = DEFAULT_RECORDER_CONFIG,
) -> OrderedTree:
    """Ball around 0 of the record graph of y, read as an open window of increments.

    Vertices whose parent or children depend on values outside [lo, hi] are flagged.
    The default radius reaches every index of the window.
    """
    if not y.lo <= 0 <= y.hi:
        raise CodecError(f"Code window [{y.lo}, {y.hi}] must contain index 0")
    w = fixed_window(list(y.values), lo=y.lo, closed=False)
    return component_ball(w, len(y) + 1 if radius is None else radius, config=config)


def finite_code_check(t: OrderedTree) -> FiniteCodeReport:
    """Coding sums of a finite tree read in ascending RLS order.

    The total of d_1(v) - 1 is -1 and every prefix sum is negative (a prefix of the
    post-order is a forest of whole subtrees).
    """
    if not t.is_fully_resolved():
        raise CodecError("finite_code_check needs a fully resolved tree")
    if t.parent[t.top] is not None:
        raise CodecError("finite_code_check needs the whole tree")
    code = [t.out_degree(v) - 1 for v in rls_sort(t)]
    running = 0
    violating: Optional[int] = None
    for k, y in enumerate(code, start=1):
        running += y
        if running >= 0 and violating is None:
            violating = k
    return FiniteCodeReport(
        passed=running == -1 and violating is None,
        total=running,
        code=code,
        violating_prefix=violating,
    )


def compare_with_window(
    t: OrderedTree, y: CodeSequence, n_back: int, n_fwd: int
) -> RoundtripReport:
    """Read phi_R of t around the vertex labelled 0 and compare it with y index by index.

    The vertex on the step into n+1 must carry label n+1; indices of y that phi_R cannot
    read, or that fall outside y, are counted as censored.
    """
    report = RoundtripReport()
    o = t.vertex_of_label(0)
    wanted = [n for n in range(-n_back - 1, n_fwd) if y.lo <= n < y.hi]
    if o is None:
        report.censored = len(wanted)
        return report
    line = _succession_line(t, o, n_back, n_fwd)
    code = resolved_code(t, o, n_back, n_fwd)
    for n in wanted:
        if not code.lo <= n < code.hi:
            report.censored += 1
            continue
        report.compared += 1
        vertex = line[n - code.lo]
        if code.at(n) != y.at(n) or t.labels[vertex] != n + 1:
            report.mismatches += 1
            report.mismatched_indices.append(n)
    return report


def roundtrip_check(
    w: TrajectoryWindow,
    n: int,
    radius: Optional[int] = None,
    config: RecorderConfig = DEFAULT_RECORDER_CONFIG,
) -> RoundtripReport:
    """phi_R of the record component of 0 against the generating increments x_k, |k| <= n.

    Meant for zero-mean skip-free i.i.d. windows, where the succession line is the
    integers in order and d_1(i) = x_{i-1} + 1.
    """
    if w.law is not None and w.law.kind is not LawKind.SKIP_FREE:
        raise CodecError("roundtrip_check needs a skip-free law")
    tree = component_ball(w, 2 * n + 2 if radius is None else radius, config=config)
    lo, hi = -n - 1, n
    if not w.ensure(lo, hi):
        report = RoundtripReport()
        report.censored = hi - lo
        return report
    x = CodeSequence(lo=lo, values=tuple(int(v) for v in w.increments(lo, hi)))
    return compare_with_window(tree, x, n, n)


def encode_tree_text(text: str) -> CodeSequence:
    """phi_R of a whole finite tree in the text format, from its smallest to its largest vertex."""
    t = parse(text)
    order = rls_sort(t)
    position = order.index(t.root)
    return phi_R(t, t.root, position, len(order) - 1 - position)


def decode_sequence_text(text: str, lo: Optional[int] = None) -> OrderedTree:
    return psi_R(CodeSequence.from_text(text, lo))
