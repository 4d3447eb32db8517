"""Explicit Weinstein tubular-neighborhood radii and a verified Moser construction."""

from weinstein_tube.bounds import LogReal, weinstein_chain
from weinstein_tube.formatters import emit_report
from weinstein_tube.injectivity import injectivity_probe
from weinstein_tube.models import CheckReport, GeometryBudget, SceneConfig, SuiteReport
from weinstein_tube.moser import MoserConstruction, TubeRegion
from weinstein_tube.parsers import load_scene
from weinstein_tube.sasaki import NormalBundle, NormalBundlePoint, SasakiTangent
from weinstein_tube.suite import list_checks, run_moser, run_suite

__version__ = "0.1.0"

__all__ = [
    "CheckReport",
    "GeometryBudget",
    "LogReal",
    "MoserConstruction",
    "NormalBundle",
    "NormalBundlePoint",
    "SasakiTangent",
    "SceneConfig",
    "SuiteReport",
    "TubeRegion",
    "emit_report",
    "injectivity_probe",
    "list_checks",
    "load_scene",
    "run_moser",
    "run_suite",
    "weinstein_chain",
]
