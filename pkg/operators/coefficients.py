"""Coefficients - Boundary blocks and interior stencils of the staggered SBP families.

All values are for unit grid spacing. Row and column indices are 0-based:
row ``i`` of a derivative block is vertex ``i``; column ``j`` is cell ``j``.
The lower-right corners are recovered by symmetry in ``operators.sbp1d``.
"""

from dataclasses import dataclass
from typing import Dict, List, Tuple


# Free parameters of the 6/3 derivative operator, (c34, c55).
POLY_PARAMETERS: Tuple[float, float] = (0.6690374220138081, -0.7930390145751754)
WAVE_PARAMETERS: Tuple[float, float] = (0.467391226104632, -0.723617281756727)

# Free parameters of the interpolation operators.
INTERP42_PARAMETERS: Dict[str, float] = {
    "c13": 102207746025903 / 808013506696916,
    "c14": -289843969221617 / 9696162080362992,
}
INTERP63_PARAMETERS: Dict[str, float] = {
    "c42": -0.3332211159670528,
    "c43": 0.3310769312612241,
    "c52": -0.07099703081266314,
    "c53": -0.2916164053358880,
    "c62": 0.05753938634775091,
    "c64": -0.1230378129758785,
}


@dataclass(frozen=True)
class StencilTable:
    """Everything needed to assemble one operator family on N cells.

    Attributes:
        hv_boundary: Leading diagonal entries of Hv (mirrored at the right end).
        hc_boundary: Leading diagonal entries of Hc (mirrored at the right end).
        dcv_boundary: Upper-left rows of Dcv.
        dcv_offsets: Column offsets of the interior Dcv stencil relative to the row.
        dcv_interior: Interior Dcv coefficients.
        pvc_boundary: Upper-left rows of Pvc.
        pvc_offsets: Column offsets of the interior Pvc stencil relative to the row.
        pvc_interior: Interior Pvc coefficients.
        left_extrapolation: Leading entries of l (r is its mirror image).
        min_cells: Smallest N with non-overlapping boundary blocks.
    """

    hv_boundary: Tuple[float, ...]
    hc_boundary: Tuple[float, ...]
    dcv_boundary: Tuple[Tuple[float, ...], ...]
    dcv_offsets: Tuple[int, ...]
    dcv_interior: Tuple[float, ...]
    pvc_boundary: Tuple[Tuple[float, ...], ...]
    pvc_offsets: Tuple[int, ...]
    pvc_interior: Tuple[float, ...]
    left_extrapolation: Tuple[float, ...]
    min_cells: int


def _rows(block: List[List[float]]) -> Tuple[Tuple[float, ...], ...]:
    return tuple(tuple(float(v) for v in row) for row in block)


def table_21() -> StencilTable:
    """Second order interior, first order boundary."""
    return StencilTable(
        hv_boundary=(1 / 2,),
        hc_boundary=(),
        dcv_boundary=_rows([[-1, 1]]),
        dcv_offsets=(-1, 0),
        dcv_interior=(-1.0, 1.0),
        pvc_boundary=(),
        pvc_offsets=(0, 1),
        pvc_interior=(1 / 2, 1 / 2),
        left_extrapolation=(3 / 2, -1 / 2),
        min_cells=4,
    )


def _interp42(c13: float, c14: float) -> List[List[float]]:
    return [
        [1 / 2 + c13 + 2 * c14, 1 / 2 - 2 * c13 - 3 * c14, c13, c14],
        [
            -8 / 63 - 52 * c13 / 21 - 104 * c14 / 21,
            29 / 42 + 104 * c13 / 21 + 52 * c14 / 7,
            -52 * c13 / 21 + 1 / 2,
            -4 / 63 - 52 * c14 / 21,
        ],
        [
            26 * c13 / 25 + 52 * c14 / 25 - 1 / 25,
            -1 / 50 - 52 * c13 / 25 - 78 * c14 / 25,
            3 / 5 + 26 * c13 / 25,
            13 / 25 + 26 * c14 / 25,
            -3 / 50,
        ],
    ]


def table_42() -> StencilTable:
    """Fourth order interior, second order boundary."""
    return StencilTable(
        hv_boundary=(7 / 18, 9 / 8, 1.0, 71 / 72),
        hc_boundary=(13 / 12, 7 / 8, 25 / 24),
        dcv_boundary=_rows([
            [-2, 3, -1],
            [-1, 1],
            [1 / 24, -9 / 8, 9 / 8, -1 / 24],
            [-1 / 71, 6 / 71, -83 / 71, 81 / 71, -3 / 71],
        ]),
        dcv_offsets=(-2, -1, 0, 1),
        dcv_interior=(1 / 24, -9 / 8, 9 / 8, -1 / 24),
        pvc_boundary=_rows(_interp42(**INTERP42_PARAMETERS)),
        pvc_offsets=(-1, 0, 1, 2),
        pvc_interior=(-1 / 16, 9 / 16, 9 / 16, -1 / 16),
        left_extrapolation=(15 / 8, -10 / 8, 3 / 8),
        min_cells=8,
    )


def _derivative63(c34: float, c55: float) -> List[List[float]]:
    return [
        [
            (-60711983 + 15005904 * c55 + 5183400 * c34) / 21888000,
            (101173243 - 30011808 * c55 - 15550200 * c34) / 17510400,
            (-7780959 + 1727800 * c34) / 1459200,
            (-5183400 * c34 + 35609465 + 30011808 * c55) / 8755200,
            (-7502952 * c55 - 5209847) / 2188800,
            (18712829 + 30011808 * c55 + 1727800 * c34) / 29184000,
        ],
        [
            (-53376169 - 30011808 * c55 - 10366800 * c34) / 43822080,
            (7190801 + 10003936 * c55 + 5183400 * c34) / 5842944,
            -(2591700 * c34 - 2846555) / 2191104,
            (-27181195 - 30011808 * c55 + 5183400 * c34) / 8764416,
            (7223559 + 10003936 * c55) / 2921472,
            (-59866697 - 90035424 * c55 - 5183400 * c34) / 87644160,
        ],
        [
            (332488 + 625246 * c55 + 215975 * c34) / 353280,
            (-6326795 - 10003936 * c55 - 5183400 * c34) / 2260992,
            (1727800 * c34 - 665205) / 565248,
            (8940511 + 10003936 * c55 - 1727800 * c34) / 1130496,
            (-3843253 - 5001968 * c55) / 565248,
            (21758409 + 30011808 * c55 + 1727800 * c34) / 11304960,
        ],
        [
            (-17586239 - 30011808 * c55 - 10366800 * c34) / 36541440,
            (14084351 + 30011808 * c55 + 15550200 * c34) / 14616576,
            -(215975 * c34) / 152256,
            (5183400 * c34 - 30011808 * c55 - 21697151) / 7308288,
            (25503551 + 30011808 * c55) / 7308288,
            (-24437759 - 30011808 * c55 - 1727800 * c34) / 24360960,
        ],
        [
            (9606527 + 15005904 * c55 + 5183400 * c34) / 65111040,
            (-4598783 - 10003936 * c55 - 5183400 * c34) / 17362944,
            (-4811905 + 5183400 * c34) / 13022208,
            (5665537 - 5183400 * c34 + 30011808 * c55) / 26044416,
            -(312623 * c55) / 271296,
            (68894207 + 90035424 * c55 + 5183400 * c34) / 260444160,
            3 / 628,
        ],
    ]


def _interp63(
    c42: float, c43: float, c52: float, c53: float, c62: float, c64: float
) -> List[List[float]]:
    row1 = [
        4474753 / 7808712 + 312623 * c53 / 650726 + 937869 * c52 / 650726
        - 813687 * c64 / 1301452 + 2441061 * c62 / 1301452
        + 86857 * c42 / 325363 + 86857 * c43 / 976089,
        136944 / 325363 - 173714 * c42 / 325363 - 1627374 * c62 / 325363
        - 937869 * c52 / 325363,
        -848457 / 2602904 - 173714 * c43 / 325363 + 2441061 * c64 / 650726
        + 2441061 * c62 / 650726 - 937869 * c53 / 325363,
        2331127 / 3904356 + 173714 * c42 / 325363 + 694856 * c43 / 976089
        - 1627374 * c64 / 325363 + 1250492 * c53 / 325363
        + 937869 * c52 / 325363,
        -10145 / 38278 - 937869 * c53 / 650726 - 937869 * c52 / 650726
        + 2441061 * c64 / 1301452 - 813687 * c62 / 1301452
        - 86857 * c42 / 325363 - 86857 * c43 / 325363,
    ]
    row2 = [
        -373145 / 354464 - 86857 * c43 / 144001 + 4068435 * c64 / 1152008
        - 12205305 * c62 / 1152008 - 1250492 * c53 / 432003
        - 260571 * c42 / 144001 - 1250492 * c52 / 144001,
        273888 / 144001 + 521142 * c42 / 144001 + 4068435 * c62 / 144001
        + 2500984 * c52 / 144001,
        520551 / 209456 + 521142 * c43 / 144001 - 12205305 * c64 / 576004
        - 12205305 * c62 / 576004 + 2500984 * c53 / 144001,
        -1142117 / 288002 - 521142 * c42 / 144001 - 694856 * c43 / 144001
        + 4068435 * c64 / 144001 - 10003936 * c53 / 432003
        - 2500984 * c52 / 144001,
        7516251 / 4608032 + 260571 * c43 / 144001 - 12205305 * c64 / 1152008
        + 4068435 * c62 / 1152008 + 1250492 * c53 / 144001
        + 260571 * c42 / 144001 + 1250492 * c52 / 144001,
    ]
    row3 = [
        930131 / 6911200 + 312623 * c53 / 431950 - 271229 * c64 / 345560
        + 86857 * c43 / 431950 + 813687 * c62 / 345560
        + 937869 * c52 / 431950 + 260571 * c42 / 431950,
        -22824 / 215975 - 260571 * c42 / 215975 - 271229 * c62 / 43195
        - 937869 * c52 / 215975,
        -424911 / 3455600 - 937869 * c53 / 215975 + 813687 * c64 / 172780
        - 260571 * c43 / 215975 + 813687 * c62 / 172780,
        330902 / 215975 + 1250492 * c53 / 215975 + 937869 * c52 / 215975
        - 271229 * c64 / 43195 + 260571 * c42 / 215975
        + 347428 * c43 / 215975,
        -615889 / 1382240 - 937869 * c53 / 431950 + 813687 * c64 / 345560
        - 260571 * c43 / 431950 - 271229 * c62 / 345560
        - 937869 * c52 / 431950 - 260571 * c42 / 431950,
        324 / 43195,
    ]
    row4 = [
        -17737 / 4169136 - (3 * c42 + c43) / 6,
        c42,
        c43,
        415759 / 1042284 - (3 * c42 + 4 * c43) / 3,
        1031359 / 1389712 + c42 / 2 + c43 / 2,
        -13500 / 86857,
        1620 / 86857,
    ]
    row5 = [
        44783 / 5001968 - (c53 + 3 * c52) / 6,
        c52,
        c53,
        -199149 / 1250492 - (4 * c53 + 3 * c52) / 3,
        3541941 / 5001968 + c53 / 2 + c52 / 2,
        162000 / 312623,
        -27000 / 312623,
        3240 / 312623,
    ]
    row6 = [
        -123231 / 8679328 + c64 / 8 - 3 * c62 / 8,
        c62,
        30309 / 619952 - 3 * c64 / 4 - 3 * c62 / 4,
        c64,
        -1229447 / 8679328 - 3 * c64 / 8 + c62 / 8,
        162000 / 271229,
        162000 / 271229,
        -27000 / 271229,
        3240 / 271229,
    ]
    return [row1, row2, row3, row4, row5, row6]


def table_63(parameters: Tuple[float, float]) -> StencilTable:
    """Sixth order interior, third order boundary.

    Args:
        parameters: The (c34, c55) pair of the derivative boundary block.
    """
    c34, c55 = parameters
    return StencilTable(
        hv_boundary=(95 / 288, 317 / 240, 23 / 30, 793 / 720, 157 / 160),
        hc_boundary=(
            325363 / 276480,
            144001 / 276480,
            43195 / 27648,
            86857 / 138240,
            312623 / 276480,
            271229 / 276480,
        ),
        dcv_boundary=_rows(_derivative63(c34, c55)),
        dcv_offsets=(-3, -2, -1, 0, 1, 2),
        dcv_interior=(-3 / 640, 25 / 384, -75 / 64, 75 / 64, -25 / 384, 3 / 640),
        pvc_boundary=_rows(_interp63(**INTERP63_PARAMETERS)),
        pvc_offsets=(-2, -1, 0, 1, 2, 3),
        pvc_interior=(3 / 256, -25 / 256, 150 / 256, 150 / 256, -25 / 256, 3 / 256),
        left_extrapolation=(35 / 16, -35 / 16, 21 / 16, -5 / 16),
        min_cells=12,
    )
