# Delay every hypothesis subtitle by a growing offset. WER only looks at the words,
# t-WER and SubER require the words to be on screen at the right time.
import numpy as np

from subscore import SubtitleBlock, SubtitleFile, compute_metric

rng = np.random.default_rng(0)
vocab = np.array("we never talked about what happened that night on the boat".split())

blocks = []
t = 0
for k in range(8):
    words = rng.choice(vocab, size=rng.integers(3, 8))
    duration = int(rng.integers(1500, 3500))
    blocks.append(SubtitleBlock(k + 1, t, t + duration, (" ".join(words),)))
    t += duration + int(rng.integers(100, 800))
ref = SubtitleFile(tuple(blocks))

print(f"{'offset ms':>9}  {'WER':>6} {'t-WER':>6} {'SubER':>6}")
for offset in (0, 250, 500, 1000, 2000, 4000, 8000, 60000):
    hyp = SubtitleFile(tuple(SubtitleBlock(b.index, b.start + offset, b.end + offset, b.lines) for b in blocks))
    values = [compute_metric(m, hyp, ref).value for m in ("WER", "t-WER", "SubER")]
    print(f"{offset:>9}  " + " ".join(f"{v:6.2f}" for v in values))
