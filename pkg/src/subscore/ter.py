"""Edit distance with phrase shifts (TER) over token sequences.

The match rule is pluggable: the plain predicate compares surfaces, the
time-overlap predicate additionally requires the originating subtitle
blocks of both tokens to overlap in time and forbids word/break
substitutions.

Distances are computed exactly (no beam). Each DP row is vectorized: with
``tmp[j] = min(diag, up)`` the horizontal recurrence ``row[j] = min(tmp[j],
row[j-1] + 1)`` equals ``j + cummin(tmp[k] - k)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from subscore.tokens import WORD, Token

INF = 1 << 40

MAX_SHIFT_SIZE = 10
MAX_SHIFT_DISTANCE = 50

MATCH, SUB, INS, DEL = "M", "S", "I", "D"

# Move-table bits: cell reachable optimally by consuming a hypothesis token
# (insertion), both tokens (match/substitution) or a reference token (deletion).
INS_OK, DIAG_OK, DEL_OK = 1, 2, 4
TER_PREFERENCE = (DIAG_OK, DEL_OK, INS_OK)


@dataclass(frozen=True)
class EditCounts:
    insertions: int = 0
    deletions: int = 0
    substitutions: int = 0
    shifts: int = 0
    ref_length: int = 0

    @property
    def edits(self) -> int:
        return self.insertions + self.deletions + self.substitutions + self.shifts

    def __add__(self, other: "EditCounts") -> "EditCounts":
        return EditCounts(
            self.insertions + other.insertions,
            self.deletions + other.deletions,
            self.substitutions + other.substitutions,
            self.shifts + other.shifts,
            self.ref_length + other.ref_length,
        )

    def rate(self) -> float:
        """Edits per reference token.

        An empty reference divides by 1 instead (so empty against empty is 0);
        callers report that case to the user.
        """
        return self.edits / max(self.ref_length, 1)

    def as_dict(self) -> dict:
        return {
            "insertions": self.insertions,
            "deletions": self.deletions,
            "substitutions": self.substitutions,
            "shifts": self.shifts,
            "ref_length": self.ref_length,
        }


def sum_counts(counts) -> EditCounts:
    total = EditCounts()
    for c in counts:
        total = total + c
    return total


def spans_overlap(a: tuple[int, int], b: tuple[int, int]) -> bool:
    """Strict overlap of half-open spans; touching endpoints do not overlap."""
    return a[0] < b[1] and b[0] < a[1]


@dataclass(frozen=True)
class MatchPredicate:
    kind: str = "plain"

    def __post_init__(self):
        if self.kind not in ("plain", "time-overlap"):
            raise ValueError(f"unknown predicate kind {self.kind!r}")

    def matches(self, h: Token, r: Token) -> bool:
        if h.kind != r.kind or h.surface != r.surface:
            return False
        return self.kind == "plain" or spans_overlap(h.span, r.span)

    def substitution_cost(self, h: Token, r: Token) -> int:
        if self.matches(h, r):
            return 0
        if self.kind == "plain":
            return 1
        if (h.kind == WORD) != (r.kind == WORD):
            return INF
        return 1 if spans_overlap(h.span, r.span) else INF

    def cost_matrix(self, hyp: Sequence[Token], ref: Sequence[Token]) -> np.ndarray:
        """Diagonal-move costs: 0 match, 1 substitution, INF not allowed."""
        n, m = len(hyp), len(ref)
        if n == 0 or m == 0:
            return np.zeros((n, m), dtype=np.int64)
        keys = {}
        h_ids = np.array([keys.setdefault(t.key(), len(keys)) for t in hyp])
        r_ids = np.array([keys.setdefault(t.key(), len(keys)) for t in ref])
        equal = h_ids[:, None] == r_ids[None, :]
        if self.kind == "plain":
            return np.where(equal, 0, 1).astype(np.int64)
        h_start = np.array([t.span[0] for t in hyp])[:, None]
        h_end = np.array([t.span[1] for t in hyp])[:, None]
        r_start = np.array([t.span[0] for t in ref])[None, :]
        r_end = np.array([t.span[1] for t in ref])[None, :]
        overlap = (h_start < r_end) & (r_start < h_end)
        h_word = np.array([t.kind == WORD for t in hyp])[:, None]
        r_word = np.array([t.kind == WORD for t in ref])[None, :]
        cost = np.full((n, m), INF, dtype=np.int64)
        cost[overlap & (h_word == r_word)] = 1
        cost[overlap & equal] = 0
        return cost


PLAIN = MatchPredicate("plain")
TIME_OVERLAP = MatchPredicate("time-overlap")


class _LazyCost:
    """Row-at-a-time view of ``pred.cost_matrix`` for long sequences."""

    def __init__(self, pred: MatchPredicate, hyp: Sequence[Token], ref: Sequence[Token]):
        self.pred = pred
        keys: dict = {}
        self.h_ids = np.array([keys.setdefault(t.key(), len(keys)) for t in hyp], dtype=np.int64)
        self.r_ids = np.array([keys.setdefault(t.key(), len(keys)) for t in ref], dtype=np.int64)
        if pred.kind != "plain":
            self.h_span = np.array([t.span for t in hyp], dtype=np.int64).reshape(-1, 2)
            self.r_span = np.array([t.span for t in ref], dtype=np.int64).reshape(-1, 2)
            self.h_word = np.array([t.kind == WORD for t in hyp])
            self.r_word = np.array([t.kind == WORD for t in ref])

    def __getitem__(self, key):
        if isinstance(key, tuple):
            h, j = key
            if self.pred.kind == "plain":
                return int(self.r_ids[j] != self.h_ids[h])
            return int(self._row(h)[j])
        return self._row(key)

    def _row(self, h: int) -> np.ndarray:
        equal = self.r_ids == self.h_ids[h]
        if self.pred.kind == "plain":
            return np.where(equal, 0, 1).astype(np.int64)
        start, end = self.h_span[h]
        overlap = (start < self.r_span[:, 1]) & (self.r_span[:, 0] < end)
        row = np.full(len(self.r_ids), INF, dtype=np.int64)
        row[overlap & (self.r_word == self.h_word[h])] = 1
        row[overlap & equal] = 0
        return row


class _Levenshtein:
    """Levenshtein distance of permutations of a fixed hypothesis against a
    fixed reference, with a precomputed diagonal cost for every token pair."""

    def __init__(self, cost: np.ndarray, m: int):
        self.cost = cost
        self.m = m
        self.ar = np.arange(m + 1, dtype=np.int64)

    def _row(self, prev: np.ndarray, cost_row: np.ndarray) -> np.ndarray:
        tmp = np.empty_like(prev)
        tmp[0] = prev[0] + 1
        np.minimum(prev[:-1] + cost_row, prev[1:] + 1, out=tmp[1:])
        tmp -= self.ar
        np.minimum.accumulate(tmp, out=tmp)
        tmp += self.ar
        return tmp

    def matrix(self, order: Sequence[int], with_moves: bool = False):
        """Full DP matrix; optionally also a table of optimal moves per cell."""
        n, m = len(order), self.m
        rows = np.empty((n + 1, m + 1), dtype=np.int64)
        rows[0] = self.ar
        moves = self._first_moves(n) if with_moves else None
        for i, h in enumerate(order):
            rows[i + 1] = self._row(rows[i], self.cost[h])
            if with_moves:
                self._fill_moves(moves[i + 1], rows[i], rows[i + 1], self.cost[h])
        return (rows, moves) if with_moves else rows

    def moves(self, order: Sequence[int]) -> tuple[int, np.ndarray]:
        """Distance and move table without keeping the full matrix."""
        moves = self._first_moves(len(order))
        row = self.ar
        for i, h in enumerate(order):
            new = self._row(row, self.cost[h])
            self._fill_moves(moves[i + 1], row, new, self.cost[h])
            row = new
        return int(row[-1]), moves

    def _first_moves(self, n: int) -> np.ndarray:
        moves = np.zeros((n + 1, self.m + 1), dtype=np.uint8)
        moves[0, 1:] = DEL_OK
        return moves

    @staticmethod
    def _fill_moves(out: np.ndarray, prev: np.ndarray, row: np.ndarray, cost_row: np.ndarray):
        out[:] = np.where(row == prev + 1, INS_OK, 0)
        out[1:] |= np.where(row[1:] == prev[:-1] + cost_row, DIAG_OK, 0).astype(np.uint8)
        out[1:] |= np.where(row[1:] == row[:-1] + 1, DEL_OK, 0).astype(np.uint8)

    def distance_from(self, order: Sequence[int], start: int, row: np.ndarray) -> int:
        """Distance for ``order`` given the DP row after its first ``start`` tokens."""
        for h in order[start:]:
            row = self._row(row, self.cost[h])
        return int(row[-1])

    def backtrace(
        self,
        order: Sequence[int],
        moves: np.ndarray,
        prefer: Sequence[int] = TER_PREFERENCE,
        starts: Optional[tuple[Sequence[int], Sequence[int]]] = None,
    ) -> list[str]:
        """Forward edit script following the first allowed move in ``prefer``.

        With ``starts`` (hypothesis and reference token start times), a tie
        between insertion and deletion is resolved by consuming the later
        token first, so the path never pairs up tokens of time regions that
        are separated by silence.
        """
        ops = []
        i, j = len(order), self.m
        indel = INS_OK | DEL_OK
        while i > 0 or j > 0:
            code = moves[i, j]
            for move in prefer:
                if code & move:
                    break
            else:
                raise AssertionError(f"no optimal move at cell {(i, j)}")
            if starts is not None and move != DIAG_OK and code & indel == indel:
                move = DEL_OK if starts[1][j - 1] > starts[0][order[i - 1]] else INS_OK
            if move == DIAG_OK:
                ops.append(MATCH if self.cost[order[i - 1], j - 1] == 0 else SUB)
                i -= 1
                j -= 1
            elif move == INS_OK:
                ops.append(INS)
                i -= 1
            else:
                ops.append(DEL)
                j -= 1
        ops.reverse()
        return ops


def levenshtein_ops(
    hyp: Sequence[Token],
    ref: Sequence[Token],
    pred: MatchPredicate = PLAIN,
    prefer: Sequence[int] = TER_PREFERENCE,
) -> list[str]:
    """Optimal edit script turning ``hyp`` into ``ref`` (no shifts)."""
    lev = _Levenshtein(_LazyCost(pred, hyp, ref), len(ref))
    order = list(range(len(hyp)))
    _, moves = lev.moves(order)
    return lev.backtrace(order, moves, prefer)


def levenshtein_counts(
    hyp: Sequence[Token], ref: Sequence[Token], pred: MatchPredicate = PLAIN
) -> EditCounts:
    return _counts(levenshtein_ops(hyp, ref, pred), 0, len(ref))


def _counts(ops: Sequence[str], shifts: int, ref_length: int) -> EditCounts:
    return EditCounts(
        insertions=ops.count(INS),
        deletions=ops.count(DEL),
        substitutions=ops.count(SUB),
        shifts=shifts,
        ref_length=ref_length,
    )


def _alignment(ops: Sequence[str]):
    """Reference-to-hypothesis alignment and per-position error flags.

    A deleted reference token is aligned to the last hypothesis position
    consumed before it (-1 at the very start).
    """
    h = r = -1
    align, hyp_err, ref_err = [], [], []
    for op in ops:
        if op in (MATCH, SUB):
            h += 1
            r += 1
            align.append(h)
            err = op == SUB
            hyp_err.append(err)
            ref_err.append(err)
        elif op == INS:
            h += 1
            hyp_err.append(True)
        else:
            r += 1
            align.append(h)
            ref_err.append(True)
    return align, hyp_err, ref_err


def apply_shift(seq: Sequence, start: int, length: int, dest: int) -> list:
    """Move ``seq[start:start+length]`` so it begins at ``dest`` in the result."""
    rest = list(seq[:start]) + list(seq[start + length:])
    return rest[:dest] + list(seq[start:start + length]) + rest[dest:]


@dataclass(frozen=True)
class Shift:
    start: int
    length: int
    dest: int
    distance_before: int
    distance_after: int


@dataclass
class ShiftSearch:
    """Outcome of the greedy shift search."""

    order: list[int]
    ops: list[str]
    counts: EditCounts
    shifts: list[Shift] = field(default_factory=list)
    initial_distance: int = 0


def shift_search(
    hyp: Sequence[Token],
    ref: Sequence[Token],
    pred: MatchPredicate = PLAIN,
    max_shift_size: int = MAX_SHIFT_SIZE,
    max_shift_distance: int = MAX_SHIFT_DISTANCE,
) -> ShiftSearch:
    """Greedy TER: apply the best distance-reducing shift until none helps.

    Candidate shifts move a hypothesis phrase that matches a reference phrase
    token by token under ``pred`` and contains an error, to the position
    aligned with that reference phrase (or just before/inside it). Among the
    candidates the largest distance reduction wins, then the earlier start,
    the earlier destination and the longer phrase.
    """
    n, m = len(hyp), len(ref)
    cost = pred.cost_matrix(hyp, ref)
    lev = _Levenshtein(cost, m)
    order = list(range(n))
    rows, moves = lev.matrix(order, with_moves=True)
    initial = int(rows[-1, -1])
    starts = None
    if pred.kind != "plain":
        starts = ([t.span[0] for t in hyp], [t.span[0] for t in ref])
    applied: list[Shift] = []
    match = cost == 0

    while n and m:
        distance = int(rows[-1, -1])
        if distance == 0:
            break
        ops = lev.backtrace(order, moves, starts=starts)
        align, hyp_err, ref_err = _alignment(ops)
        cur_match = match[order]
        best = None
        tried = set()
        for start_h, start_r in zip(*np.nonzero(cur_match)):
            start_h, start_r = int(start_h), int(start_r)
            length = 0
            while (
                length < max_shift_size
                and start_h + length < n
                and start_r + length < m
                and cur_match[start_h + length, start_r + length]
            ):
                length += 1
                if not any(hyp_err[start_h:start_h + length]):
                    continue
                if not any(ref_err[start_r:start_r + length]):
                    continue
                if start_h <= align[start_r] < start_h + length:
                    continue
                for offset in range(-1, length):
                    target = 0 if start_r + offset < 0 else align[start_r + offset] + 1
                    if start_h < target < start_h + length:
                        continue
                    dest = target if target <= start_h else target - length
                    if dest == start_h or abs(dest - start_h) > max_shift_distance:
                        continue
                    key = (start_h, length, dest)
                    if key in tried:
                        continue
                    tried.add(key)
                    shifted = apply_shift(order, start_h, length, dest)
                    prefix = min(start_h, dest)
                    new_distance = lev.distance_from(shifted, prefix, rows[prefix])
                    candidate = (distance - new_distance, -start_h, -dest, length)
                    if best is None or candidate > best[0]:
                        best = (candidate, shifted, Shift(start_h, length, dest, distance, new_distance))
        if best is None or best[0][0] <= 0:
            break
        order = best[1]
        applied.append(best[2])
        rows, moves = lev.matrix(order, with_moves=True)

    ops = lev.backtrace(order, moves, starts=starts)
    return ShiftSearch(order, ops, _counts(ops, len(applied), m), applied, initial)


def ter_with_shifts(
    hyp: Sequence[Token],
    ref: Sequence[Token],
    pred: MatchPredicate = PLAIN,
    max_shift_size: int = MAX_SHIFT_SIZE,
    max_shift_distance: int = MAX_SHIFT_DISTANCE,
) -> EditCounts:
    """TER edit counts of ``hyp`` against ``ref`` under ``pred``."""
    return shift_search(hyp, ref, pred, max_shift_size, max_shift_distance).counts
