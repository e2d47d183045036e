"""Static figure rendering for the modulated-cavity simulation CSVs."""

from .figures import FIGURES, FigureSpec, PanelSpec
from .render import MissingColumnError, RenderError, load_csv, render

__version__ = "0.1.0"

__all__ = ["FIGURES", "FigureSpec", "PanelSpec", "MissingColumnError",
           "RenderError", "load_csv", "render", "__version__"]
