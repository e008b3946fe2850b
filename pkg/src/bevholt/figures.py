"""Built-in run configurations for the six reference trajectory plots."""

from __future__ import annotations

from .config import FIXED_POINT, OUTPUTS, RunConfig

__all__ = ["FIGURES", "FIG3_IC", "FIG4_IC", "FIG56_IC"]

FIG3_IC = ("1", "2", "1", "-1/2", "1", "1/2", "-1/4", "1/2")

# printed as "z_9= 5 z_{10} = 8" with the separator missing; read as two entries
FIG4_IC = ("1", "2", "1", "-1/2", "1", "1/2", "-4", "1/2", "11", "5", "8", "-4", "-1/2", "1")

FIG56_IC = ("1", "2", "1", "-1/2", "1", "1/2", "-4", "1/2", "1", "15", "8", "4", "-1/2", "1")


def _figure(**fields) -> RunConfig:
    return RunConfig(outputs=OUTPUTS, **fields)


FIGURES = {
    "fig1": _figure(
        order=16,
        A={"formula": "3 + sin(n*pi/8)", "period": 16},
        B={"formula": "2 + cos(n*pi/8)", "period": 16},
        initial_conditions=FIXED_POINT,
        backend="float",
        horizon=300,
        name="fig1",
    ),
    "fig2": _figure(
        order=8,
        A={"formula": "3 + sin(n*pi/4)", "period": 8},
        B={"formula": "2 + cos(n*pi/4)", "period": 8},
        initial_conditions=FIXED_POINT,
        backend="float",
        horizon=300,
        name="fig2",
    ),
    "fig3": _figure(order=8, A="-1", B="12", initial_conditions=FIG3_IC, horizon=64, name="fig3"),
    "fig4": _figure(order=14, A="-1", B="15", initial_conditions=FIG4_IC, horizon=112, name="fig4"),
    "fig5": _figure(
        order=14, A="14", B="-2", initial_conditions=FIG56_IC, backend="float", horizon=700, name="fig5"
    ),
    "fig6": _figure(
        order=14, A="1/4", B="2", initial_conditions=FIG56_IC, backend="float", horizon=1200, name="fig6"
    ),
}

