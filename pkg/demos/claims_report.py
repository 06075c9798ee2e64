"""Run the quick claims and print the markdown summary table."""
from floatillum import verify as V

quick = ["Lemma2.2i", "Lemma2.3", "Lemma2.5", "Lemma2.6", "Lemma2.7", "Lemma3.2", "Thm3.1"]
reports = {c: V.run_claim(c, seed=0, trials=5) for c in quick}
print(V.render_markdown(reports))
