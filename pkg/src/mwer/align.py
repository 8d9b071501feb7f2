"""Alignment of a hypothesis against a multi-reference annotation.

The annotation is flattened into a DAG of token nodes whose Start-to-End
paths are exactly the annotation's readings, then a generalized
Needleman-Wunsch fills a (node, hypothesis position) table. Scores are
3-tuples (word errors, correct matches, character errors) compared
lexicographically, so among all word-optimal alignments the one with the
most exact matches and then the fewest character discrepancies wins.
Wildcard nodes absorb any run of hypothesis tokens at zero cost.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .annotation import Annotation, Plain, Token, Wildcard, WILDCARD_MARK


class AlignError(ValueError):
    pass


class WildcardInHypothesis(AlignError):
    pass


class EmptyFlatView(AlignError):
    pass


class NodeKind(enum.IntEnum):
    START = 0
    END = 1
    TOKEN = 2
    WILDCARD = 3


@dataclass(frozen=True)
class FlatNode:
    id: int
    kind: NodeKind
    token: Token | None = None
    segment_index: int | None = None
    option_index: int | None = None

    @property
    def text(self) -> str:
        return self.token.text if self.token else ""


class FlatView:
    """DAG of reference nodes: Start sentinel first, End sentinel last.

    Every Start-to-End path spells one acceptable reading; edges skip
    optional blocks and merged wildcard runs so empty readings need no
    explicit epsilon node.
    """

    def __init__(self, nodes: list[FlatNode], successors: list[set[int]]):
        self.nodes = nodes
        self.successors = successors
        self.predecessors: list[list[int]] = [[] for _ in nodes]
        for u, vs in enumerate(successors):
            for v in vs:
                self.predecessors[v].append(u)
        for ps in self.predecessors:
            ps.sort()

    @property
    def start_id(self) -> int:
        return 0

    @property
    def end_id(self) -> int:
        return len(self.nodes) - 1

    def token_nodes(self) -> list[FlatNode]:
        return [n for n in self.nodes if n.kind == NodeKind.TOKEN]


def flatten(annotation: Annotation) -> FlatView:
    """Enumerate annotation elements into a flat DAG.

    ``{A|B} {C} D`` yields Start->{A,B}, A->{C,D}, B->{C,D}, C->D, D->End:
    the A->D edge exists because the single-option block {C} is optional.
    A wildcard contributes one node plus a skip edge (it matches the empty
    sequence); consecutive wildcards merge into one node.
    """
    nodes: list[FlatNode] = [FlatNode(0, NodeKind.START)]
    edges: list[set[int]] = [set()]

    def add_node(kind: NodeKind, token=None, seg=None, opt=None) -> int:
        nid = len(nodes)
        nodes.append(FlatNode(nid, kind, token, seg, opt))
        edges.append(set())
        return nid

    frontier = {0}
    prev_wildcard = False
    for seg_idx, seg in enumerate(annotation.segments):
        if isinstance(seg, Plain):
            nid = add_node(NodeKind.TOKEN, seg.token, seg_idx)
            for f in frontier:
                edges[f].add(nid)
            frontier = {nid}
            prev_wildcard = False
        elif isinstance(seg, Wildcard):
            if prev_wildcard:
                continue
            nid = add_node(NodeKind.WILDCARD, None, seg_idx)
            for f in frontier:
                edges[f].add(nid)
            frontier = frontier | {nid}
            prev_wildcard = True
        else:
            entries: list[int] = []
            exits: list[int] = []
            skippable = False
            for opt_idx, opt in enumerate(seg.options):
                if opt.is_empty:
                    skippable = True
                    continue
                chain = [
                    add_node(NodeKind.TOKEN, tok, seg_idx, opt_idx)
                    for tok in opt.tokens
                ]
                for a, b in zip(chain, chain[1:]):
                    edges[a].add(b)
                entries.append(chain[0])
                exits.append(chain[-1])
            for f in frontier:
                for e in entries:
                    edges[f].add(e)
            new_frontier = set(exits)
            if skippable:
                new_frontier |= frontier
            frontier = new_frontier
            prev_wildcard = False

    end = add_node(NodeKind.END)
    for f in frontier:
        edges[f].add(end)
    return FlatView(nodes, edges)


@dataclass(frozen=True)
class ScoreTuple:
    """Lexicographic alignment cost: fewer word errors, then more correct
    matches, then fewer character errors."""

    word_errors: int = 0
    correct_matches: int = 0
    char_errors: int = 0

    def key(self):
        return (self.word_errors, -self.correct_matches, self.char_errors)

    def __lt__(self, other: "ScoreTuple") -> bool:
        return self.key() < other.key()

    def __add__(self, other: "ScoreTuple") -> "ScoreTuple":
        return ScoreTuple(
            self.word_errors + other.word_errors,
            self.correct_matches + other.correct_matches,
            self.char_errors + other.char_errors,
        )

    def to_json(self) -> dict:
        return {
            "word_errors": self.word_errors,
            "correct_matches": self.correct_matches,
            "char_errors": self.char_errors,
        }


class StepKind(str, enum.Enum):
    CORRECT = "correct"
    REPLACEMENT = "replacement"
    INSERTION = "insertion"
    DELETION = "deletion"
    WILDCARD_ABSORBED = "wildcard_absorbed"


@dataclass(frozen=True)
class AlignmentStep:
    kind: StepKind
    ref_token: Token | None = None
    hyp_token: Token | None = None
    ref_node_id: int | None = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "ref": self.ref_token.text if self.ref_token else None,
            "hyp": self.hyp_token.text if self.hyp_token else None,
            "ref_node": self.ref_node_id,
        }


@dataclass(frozen=True)
class Alignment:
    steps: tuple[AlignmentStep, ...]
    score: ScoreTuple
    ref_path: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "score": self.score.to_json(),
            "steps": [s.to_json() for s in self.steps],
        }


@dataclass(frozen=True)
class CostConfig:
    """Tie-break components, in priority order after the word error count.

    Components may be dropped or reordered; ``count_indel_chars`` controls
    whether insertions/deletions contribute their token length to the
    character error component.
    """

    tie_breakers: tuple[str, ...] = ("correct_matches", "char_errors")
    count_indel_chars: bool = True

    def __post_init__(self):
        for name in self.tie_breakers:
            if name not in ("correct_matches", "char_errors"):
                raise ValueError(f"unknown tie-break component: {name}")


def levenshtein(a: str, b: str) -> int:
    """Plain character edit distance (two-row Wagner-Fischer)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a):
        cur = [i + 1]
        append = cur.append
        for j, cb in enumerate(b):
            if ca == cb:
                append(prev[j])
            else:
                x = prev[j]
                y = prev[j + 1]
                z = cur[j]
                if y < x:
                    x = y
                if z < x:
                    x = z
                append(x + 1)
        prev = cur
    return prev[-1]


def char_cost(ref_token: Token | None, hyp_token: Token | None, kind: StepKind) -> int:
    """Character discrepancy of one step: edit distance for replacements,
    token length for one-sided steps, zero otherwise."""
    if kind in (StepKind.CORRECT, StepKind.WILDCARD_ABSORBED):
        return 0
    if kind == StepKind.REPLACEMENT:
        return levenshtein(ref_token.text, hyp_token.text)
    if kind == StepKind.INSERTION:
        return len(hyp_token.text)
    return len(ref_token.text)


_MOVE_NONE, _MOVE_DIAG, _MOVE_VERT, _MOVE_HORIZ = 0, 1, 2, 3


def align(flat: FlatView, hypothesis: list[Token], cost: CostConfig | None = None) -> Alignment:
    """Optimal alignment of a token sequence against the flat view.

    Fills the table forward over (node, consumed hypothesis prefix)
    states; ties between equal score tuples are broken deterministically,
    preferring diagonal over vertical over horizontal steps and then the
    lower reference node id.
    """
    cost = cost or CostConfig()
    for t in hypothesis:
        if t.text == WILDCARD_MARK:
            raise WildcardInHypothesis(f"hypothesis token {t.original!r} is a wildcard")
    nodes = flat.nodes
    n_nodes = len(nodes)
    if n_nodes < 2:
        raise EmptyFlatView("flat view lost its sentinels")

    hyp_texts = [t.text for t in hypothesis]
    hyp_lens = [len(t) for t in hyp_texts]
    n_hyp = len(hyp_texts)

    kinds = [int(n.kind) for n in nodes]
    texts = [n.text for n in nodes]
    text_lens = [len(t) for t in texts]
    preds = flat.predecessors

    # Scores live in one integer per cell: mixed-radix packing of the
    # configured tuple keeps comparisons and additions single operations.
    max_ce = sum(text_lens) + sum(hyp_lens) + 1
    max_cm = min(n_nodes, n_hyp) + 1
    mult = 1
    m_ce = 0
    m_cm = 0
    for name in reversed(cost.tie_breakers):
        bound = max_ce if name == "char_errors" else max_cm
        if name == "char_errors":
            m_ce = mult
        else:
            m_cm = -mult
        width = 4
        while width <= bound:
            width <<= 1
        mult *= width * 4
    word_unit = mult

    count_indel = cost.count_indel_chars
    ins_delta = [
        word_unit + (hyp_lens[j] * m_ce if count_indel else 0) for j in range(n_hyp)
    ]
    del_delta = [
        word_unit + (text_lens[s] * m_ce if count_indel else 0) for s in range(n_nodes)
    ]
    lev_cache: dict[tuple[str, str], int] = {}

    INF = 1 << 240
    K_END, K_TOKEN, K_WILD = int(NodeKind.END), int(NodeKind.TOKEN), int(NodeKind.WILDCARD)

    width_j = n_hyp + 1
    dp: list[list[int]] = [[INF] * width_j for _ in range(n_nodes)]
    back: list[list[int]] = [[-1] * width_j for _ in range(n_nodes)]

    row0 = dp[0]
    back0 = back[0]
    row0[0] = 0
    back0[0] = _MOVE_NONE
    for j in range(1, width_j):
        row0[j] = row0[j - 1] + ins_delta[j - 1]
        back0[j] = (0 << 2) | _MOVE_HORIZ

    for s in range(1, n_nodes):
        kind = kinds[s]
        srow = dp[s]
        sback = back[s]
        pred_rows = [(p, dp[p]) for p in preds[s]]

        if kind == K_END:
            for j in range(width_j):
                best = INF
                code = -1
                for p, prow in pred_rows:
                    cand = prow[j]
                    if cand < best:
                        best = cand
                        code = (p << 2) | _MOVE_VERT
                srow[j] = best
                sback[j] = code
            continue

        if kind == K_WILD:
            # arrival absorbs one token (diagonal); further absorption is a
            # zero-cost horizontal self-loop; the empty match uses the skip
            # edge around this node instead
            for j in range(1, width_j):
                best = INF
                code = -1
                for p, prow in pred_rows:
                    cand = prow[j - 1]
                    if cand < best:
                        best = cand
                        code = (p << 2) | _MOVE_DIAG
                cand = srow[j - 1]
                if cand < best:
                    best = cand
                    code = (s << 2) | _MOVE_HORIZ
                srow[j] = best
                sback[j] = code
            continue

        stext = texts[s]
        sdel = del_delta[s]
        corr_delta = m_cm
        cache_get = lev_cache.get

        def diag_delta(htext: str) -> int:
            if stext == htext:
                return corr_delta
            key = (stext, htext)
            lev = cache_get(key)
            if lev is None:
                lev = levenshtein(stext, htext)
                lev_cache[key] = lev
            return word_unit + lev * m_ce

        diag_row = [diag_delta(h) for h in hyp_texts]

        if len(pred_rows) == 1:
            # plain chains dominate real inputs; a branch-free inner loop
            # here roughly halves the fill time
            p, prow = pred_rows[0]
            diag_code = (p << 2) | _MOVE_DIAG
            vert_code = (p << 2) | _MOVE_VERT
            horiz_code = (s << 2) | _MOVE_HORIZ
            prev = prow[0] + sdel
            srow[0] = prev
            sback[0] = vert_code
            for j in range(1, width_j):
                jm1 = j - 1
                best = prow[jm1] + diag_row[jm1]
                code = diag_code
                cand = prow[j] + sdel
                if cand < best:
                    best = cand
                    code = vert_code
                cand = prev + ins_delta[jm1]
                if cand < best:
                    best = cand
                    code = horiz_code
                srow[j] = best
                sback[j] = code
                prev = best
            continue

        for j in range(width_j):
            best = INF
            code = -1
            if j:
                delta = diag_row[j - 1]
                jm1 = j - 1
                for p, prow in pred_rows:
                    cand = prow[jm1] + delta
                    if cand < best:
                        best = cand
                        code = (p << 2) | _MOVE_DIAG
            for p, prow in pred_rows:
                cand = prow[j] + sdel
                if cand < best:
                    best = cand
                    code = (p << 2) | _MOVE_VERT
            if j:
                cand = srow[j - 1] + ins_delta[j - 1]
                if cand < best:
                    best = cand
                    code = (s << 2) | _MOVE_HORIZ
            srow[j] = best
            sback[j] = code

    end = n_nodes - 1
    assert dp[end][n_hyp] < INF, "alignment table has no finished state"

    steps: list[AlignmentStep] = []
    path: list[int] = []
    s, j = end, n_hyp
    while not (s == 0 and j == 0):
        code = back[s][j]
        move = code & 3
        p = code >> 2
        if move == _MOVE_DIAG:
            hyp_tok = hypothesis[j - 1]
            if kinds[s] == K_WILD:
                steps.append(
                    AlignmentStep(StepKind.WILDCARD_ABSORBED, None, hyp_tok, s)
                )
            elif texts[s] == hyp_texts[j - 1]:
                steps.append(AlignmentStep(StepKind.CORRECT, nodes[s].token, hyp_tok, s))
            else:
                steps.append(
                    AlignmentStep(StepKind.REPLACEMENT, nodes[s].token, hyp_tok, s)
                )
            path.append(s)
            s, j = p, j - 1
        elif move == _MOVE_VERT:
            if kinds[s] == K_TOKEN:
                steps.append(AlignmentStep(StepKind.DELETION, nodes[s].token, None, s))
            path.append(s)
            s = p
        elif move == _MOVE_HORIZ:
            if kinds[s] == K_WILD:
                steps.append(
                    AlignmentStep(StepKind.WILDCARD_ABSORBED, None, hypothesis[j - 1], s)
                )
            else:
                steps.append(
                    AlignmentStep(StepKind.INSERTION, None, hypothesis[j - 1], None)
                )
            j -= 1
        else:  # pragma: no cover - loop guard
            raise AssertionError("broken traceback chain")
    path.append(0)
    steps.reverse()
    path.reverse()

    # The wildcard self-loop walks the wildcard id once per absorbed token;
    # collapse repeats so ref_path is a simple DAG path.
    dedup: list[int] = []
    for nid in path:
        if not dedup or dedup[-1] != nid:
            dedup.append(nid)

    word_errors = 0
    correct = 0
    char_errors = 0
    for st in steps:
        if st.kind == StepKind.CORRECT:
            correct += 1
        elif st.kind == StepKind.REPLACEMENT:
            word_errors += 1
            char_errors += char_cost(st.ref_token, st.hyp_token, st.kind)
        elif st.kind in (StepKind.INSERTION, StepKind.DELETION):
            word_errors += 1
            if count_indel:
                char_errors += char_cost(st.ref_token, st.hyp_token, st.kind)

    return Alignment(
        steps=tuple(steps),
        score=ScoreTuple(word_errors, correct, char_errors),
        ref_path=tuple(dedup),
    )


def expand_to_chars(flat: FlatView) -> FlatView:
    """Rewrite each token node as a chain of single-character nodes.

    Word boundaries are not alignment elements; wildcard nodes stay intact
    and absorb arbitrary characters.
    """
    nodes: list[FlatNode] = []
    edges: list[set[int]] = []
    first: dict[int, int] = {}
    last: dict[int, int] = {}

    def add(kind: NodeKind, token=None, seg=None, opt=None) -> int:
        nid = len(nodes)
        nodes.append(FlatNode(nid, kind, token, seg, opt))
        edges.append(set())
        return nid

    for node in flat.nodes:
        if node.kind == NodeKind.TOKEN:
            chain = [
                add(NodeKind.TOKEN, Token(ch), node.segment_index, node.option_index)
                for ch in node.token.text
            ]
            for a, b in zip(chain, chain[1:]):
                edges[a].add(b)
            first[node.id] = chain[0]
            last[node.id] = chain[-1]
        else:
            nid = add(node.kind, None, node.segment_index, node.option_index)
            first[node.id] = nid
            last[node.id] = nid

    for u, vs in enumerate(flat.successors):
        for v in vs:
            edges[last[u]].add(first[v])
    return FlatView(nodes, edges)


def align_chars(flat: FlatView, hypothesis: list[Token], cost: CostConfig | None = None) -> Alignment:
    """Character-level alignment: same algorithm with characters as elements."""
    for t in hypothesis:
        if t.text == WILDCARD_MARK:
            raise WildcardInHypothesis(f"hypothesis token {t.original!r} is a wildcard")
    char_flat = expand_to_chars(flat)
    char_hyp = [Token(ch, t.original) for t in hypothesis for ch in t.text]
    return align(char_flat, char_hyp, cost)
