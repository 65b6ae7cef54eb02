# Walk through the two-file example shipped with the tests: tokens, scoring regions,
# the shifts the greedy search applies, and every metric side by side.
from pathlib import Path

from subscore import METRIC_NAMES, compute_metric, load_srt, split_scoring_regions, tokenize_file
from subscore.ter import TIME_OVERLAP, apply_shift, shift_search

DATA = Path(__file__).resolve().parents[1] / "tests" / "data"
hyp = load_srt(DATA / "fig1_hyp.srt")
ref = load_srt(DATA / "fig1_ref.srt")

print("### token streams (lowercased, punctuation attached, with breaks)")
h_tokens, r_tokens = tokenize_file(hyp), tokenize_file(ref)
print("hyp:", " ".join(t.surface for t in h_tokens))
print("ref:", " ".join(t.surface for t in r_tokens))
print(f"{len(h_tokens)} hypothesis tokens, {len(r_tokens)} reference tokens")

print("\n### scoring regions (cut at mutual silence)")
for region in split_scoring_regions(hyp, ref):
    print(f"  {region.span}: hyp blocks {[b.index for b in region.hyp_blocks]}, "
          f"ref blocks {[b.index for b in region.ref_blocks]}")

print("\n### greedy shifts")
result = shift_search(h_tokens, r_tokens, TIME_OVERLAP)
order = list(range(len(h_tokens)))
for s in result.shifts:
    phrase = [h_tokens[k].surface for k in order[s.start:s.start + s.length]]
    print(f"  move {phrase} from {s.start} to {s.dest}: distance {s.distance_before} -> {s.distance_after}")
    order = apply_shift(order, s.start, s.length, s.dest)
c = result.counts
print(f"  SubER = ({c.insertions} + {c.deletions} + {c.substitutions} + {c.shifts}) / {c.ref_length}"
      f" = {100 * c.rate():.2f}%")

print("\n### all metrics")
for name in METRIC_NAMES:
    print(f"  {name:16s} {compute_metric(name, hyp, ref).value:7.2f}")
