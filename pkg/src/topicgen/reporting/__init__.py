from topicgen.reporting.figures import (
    render_bench_figure,
    render_eval_figure,
    render_sweep_figure,
    render_trace_figures,
)

__all__ = [
    "render_bench_figure",
    "render_eval_figure",
    "render_sweep_figure",
    "render_trace_figures",
]
