"""Figure rendering for capadof CSV outputs."""

from .render import PlotInputError, PlotJob, RenderResult, render

__version__ = "0.1.0"

__all__ = ["PlotInputError", "PlotJob", "RenderResult", "render"]
