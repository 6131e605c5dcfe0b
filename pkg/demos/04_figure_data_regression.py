"""
The shipped scatter datasets, no embedding required
===================================================

Two 50-point datasets ship with the package: occupation gender percentages
against embedding association strength, and the same for androgynous first
names. They let you check the regression machinery (and re-plot the
scatters) without downloading anything.
"""

from embias import builtin_figure_data, regression_suite

for figure_id, label in (
    ("fig1_occupations", "occupations: % women in job vs association"),
    ("fig2_names", "names: % women with name vs association"),
):
    points = builtin_figure_data(figure_id)
    summary = regression_suite([p.x for p in points], [p.y for p in points])
    print(f"{label}")
    print(f"  n = {len(points)}")
    print(f"  pearson rho = {summary.pearson_rho:.4f} (p = {summary.pearson_p:.3g})")
    print(f"  spearman rho = {summary.spearman_rho:.4f}")
    print(f"  fit: y = {summary.slope:.5f} x + {summary.intercept:+.4f}\n")

# re-plot, when matplotlib is around
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the plot")
else:
    fig, axes = plt.subplots(1, 2, figsize=(11, 4.5), sharey=True)
    for ax, figure_id, xlabel in (
        (axes[0], "fig1_occupations", "% of workers in occupation who are women"),
        (axes[1], "fig2_names", "% of people with name who are women"),
    ):
        points = builtin_figure_data(figure_id)
        xs = [p.x for p in points]
        ys = [p.y for p in points]
        summary = regression_suite(xs, ys)
        ax.scatter(xs, ys, s=26)
        ax.plot(
            [0, 100],
            [summary.intercept, summary.intercept + 100 * summary.slope],
        )
        ax.axhline(0.0, color="black", linewidth=0.8)
        ax.set_xlim(0, 100)
        ax.set_ylim(-2, 2)
        ax.set_xlabel(xlabel)
        ax.set_title(f"rho = {summary.pearson_rho:.2f}")
    axes[0].set_ylabel("association strength with female gender")
    fig.tight_layout()
    fig.savefig("figure_scatters.png", dpi=120)
    print("wrote figure_scatters.png")
