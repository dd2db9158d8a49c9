"""Static figures and reports from gravcat-liv CSV output files."""

__version__ = "0.1.0"

from .panels import PanelSpec, render_panel, render_report

__all__ = ["PanelSpec", "render_panel", "render_report", "__version__"]
