"""
Does triple volume track ontology complexity?
=============================================

The study pairs every subject-matter domain's triple count (y) with its
ontology complexity score (x) and reports Pearson's r plus the slope of a
simple linear regression: triples per unit of complexity. This demo runs it
over synthetic domains with one planted outlier, with and without the
exclusion, and writes the scatter outputs next to this script.
"""

import os

from fbont import StudyRow, run_study
from fbont.report import build_scatter_points, render_scatter_csv, render_scatter_svg, study_to_json

# domain, triple volume, complexity score: volume loosely tracks complexity,
# except one huge outlier domain
rows = [
    StudyRow("music", 2_100_000, 6.0),     # the outlier: volume far beyond its score
    StudyRow("film", 170_000, 5.1),
    StudyRow("tv", 160_000, 4.7),
    StudyRow("location", 150_000, 4.9),
    StudyRow("people", 145_000, 4.2),
    StudyRow("book", 80_000, 3.1),
    StudyRow("medicine", 40_000, 2.6),
    StudyRow("astronomy", 20_000, 1.8),
    StudyRow("chess", 2_000, 0.7),
    StudyRow("zoo", 1_000, 0.4),
]

everything = run_study(rows)
print(f"all {everything.n} domains:      r = {everything.pearson_r:.4f}, "
      f"slope = {everything.slope:,.2f}")

without_outlier = run_study(rows, exclusions={"music"})
print(f"excluding music:    r = {without_outlier.pearson_r:.4f}, "
      f"slope = {without_outlier.slope:,.2f}")
print("dropping the outlier strengthens the correlation and flattens the slope")

out_dir = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(out_dir, exist_ok=True)
points = build_scatter_points(rows, exclusions={"music"})
with open(os.path.join(out_dir, "study.json"), "w") as fh:
    fh.write(study_to_json(without_outlier))
with open(os.path.join(out_dir, "scatter.csv"), "w") as fh:
    fh.write(render_scatter_csv(points))
with open(os.path.join(out_dir, "scatter.svg"), "w") as fh:
    fh.write(render_scatter_svg(points, without_outlier))
print(f"\nwrote study.json, scatter.csv, scatter.svg under {out_dir}/")
print("(the excluded point is drawn hollow; the dashed line is the fit)")
