# Same words, different line breaks: word-level metrics do not notice, SubER and
# TER-br do. Each step moves one more break away from where the reference has it.
from subscore import SubtitleBlock, SubtitleFile, compute_metric

text = [
    "I was going to tell you tonight over dinner",
    "but the restaurant was closed so here we are",
    "standing in the rain with nothing to eat",
]
cuts = [5, 4, 5]  # words on the first line of each reference block


def build(cut_positions):
    blocks = []
    for k, (line, cut) in enumerate(zip(text, cut_positions)):
        words = line.split()
        lines = (" ".join(words[:cut]), " ".join(words[cut:]))
        blocks.append(SubtitleBlock(k + 1, 3000 * k, 3000 * k + 2800, lines))
    return SubtitleFile(tuple(blocks))


ref = build(cuts)
print(f"{'moved breaks':>12}  {'WER':>6} {'SubER':>6} {'TER-br-block':>12}")
for moved in range(len(cuts) + 1):
    hyp_cuts = [c + 2 if k < moved else c for k, c in enumerate(cuts)]
    hyp = build(hyp_cuts)
    row = [compute_metric(m, hyp, ref).value for m in ("WER", "SubER", "TER-br-block")]
    print(f"{moved:>12}  {row[0]:6.2f} {row[1]:6.2f} {row[2]:12.2f}")
