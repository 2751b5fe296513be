"""Published comparison values for the five benchmark problems.

Values are kept as decimal strings so they can be read at any precision.
Source tags name the method a column came from; ``present`` is the Tau
solution itself and ``residual`` its pointwise residual.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType


@dataclass(frozen=True)
class RefRow:
    x: str | None
    value: str
    source: str
    params: tuple[tuple[str, str], ...] = ()
    note: str = ""


@dataclass(frozen=True)
class ReferenceTable:
    table: int
    problem: str
    quantity: str
    n: int
    rows: tuple[RefRow, ...]
    params: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))
    digits: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))

    def column(self, source: str) -> list[RefRow]:
        return [r for r in self.rows if r.source == source]

    def sources(self) -> list[str]:
        return sorted({r.source for r in self.rows})


SQUEEZE = MappingProxyType({"A": "0.1", "S": "0.1", "G": "0.2", "Pr": "0.3", "Ec": "0.2", "delta": "0.1"})


def _cols(xs, **columns):
    rows = []
    for k, x in enumerate(xs):
        for source, values in columns.items():
            v = values[k]
            if v is not None:
                rows.append(RefRow(x, v, source))
    return tuple(rows)


_T1 = _cols(
    ["0.2", "0.4", "0.6", "0.8"],
    present=["0.384801280290557", "0.575554143054330", "0.575174675564395", "0.384040432902588"],
    VIM=["0.384801", "0.575554", "0.575174", "0.384040"],
    residual=["1.39535e-12", "8.21911e-14", "1.90287e-12", "1.91562e-12"],
)

_T2 = _cols(
    ["0.2", "0.4", "0.6", "0.8"],
    present=["0.806144282850332", "0.607022034290869", "0.407003862839112", "0.206120555470330"],
    VIM=["0.806144", "0.607022", "0.407004", "0.206121"],
    residual=["8.25970e-14", "7.26187e-14", "7.24240e-14", "8.19659e-14"],
)

_T3_ROWS = [
    # (Pr, Ec, delta, present, VIM); blank cells in the printed table repeat the row above
    ("0.0", "0.2", "0.1", "1.00000000000000000", "1.00000"),
    ("0.1", "0.2", "0.1", "1.01893685003010788", "1.01894"),
    ("0.2", "0.2", "0.1", "1.03787156909761297", "1.03787"),
    ("0.3", "0.0", "0.1", "0.99859957004178043", "0.99860"),
    ("0.3", "0.2", "0.1", "1.05680415677248143", "1.05680"),
    ("0.3", "0.4", "0.1", "1.11500874350318244", "1.11501"),
    ("0.3", "0.3", "0.0", "1.08487154864359339", "1.08487"),
    ("0.3", "0.3", "0.5", "1.11074408599955706", "1.11074"),
    ("0.3", "0.3", "1.0", "1.18836169806744806", "1.18836"),
]
_T3 = tuple(
    RefRow(None, value, source, (("Pr", pr), ("Ec", ec), ("delta", d)))
    for pr, ec, d, present, vim in _T3_ROWS
    for source, value in (("present", present), ("VIM", vim))
)

_T4 = _cols(
    ["0.01", "0.02", "0.05", "0.10", "0.20", "0.50", "0.70", "0.80", "0.90", "1.00", "1.5", "2.0", "2.5", "3.0"],
    exact=[
        "1.00010000500016667083", "1.00040008001066773341", "1.00250312760579508497",
        "1.01005016708416805754", "1.04081077419238822675", "1.28402541668774148407",
        "1.63231621995537897012", "1.89648087930495135334", "2.24790798667647141917",
        "2.71828182845904523536", "9.48773583635852572055", "54.5981500331442390781",
        "518.012824668342025939", "8103.08392757538400770",
    ],
    HFC=[
        "1.0000999826", "1.0004000642", "1.0025031064", "1.0100501492", "1.0408107527",
        "1.2840253862", "1.6323161777", "1.8964808279", "2.2479078937", "2.7182819166",
        None, None, None, None,
    ],
    present=[
        "1.00010000500016665722", "1.00040008001066774881", "1.00250312760579507309",
        "1.01005016708416805546", "1.04081077419238822399", "1.28402541668774147818",
        "1.63231621995537896294", "1.89648087930495136037", "2.24790798667647141232",
        "2.71828182845904524184", "9.48773583635852572300", "54.5981500331442390719",
        "518.012824668342025947", "8103.08392757538400765",
    ],
)


def _t5() -> tuple[RefRow, ...]:
    xs = ["0.1", "0.2", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9", "1.0"]
    rows = list(
        _cols(
            xs,
            FCFs=["-2.500e-5", "-4.004e-4", "-2.032e-3", "-6.459e-3", "-1.591e-2",
                  "-3.346e-2", "-6.327e-2", "-1.111e-1", "-1.855e-1", "-2.999e-1"],
            present=["-2.541201381e-5", "-4.000957821e-4", "-2.033184449e-3", "-6.459447204e-3",
                     "-1.591376982e-2", "-3.346334651e-2", "-6.327405918e-2", "-1.111347323e-1",
                     "-1.855105463e-1", "-2.999554921e-1"],
            residual=["2.13471e-6", "1.42107e-6", "3.48798e-6", "7.35610e-6", "6.64911e-6",
                      "1.36557e-6", "4.86862e-6", "9.41866e-6", "1.23827e-5", "1.98917e-4"],
        )
    )
    notes = {
        ("0.7", "present"): "printed without its minus sign",
        ("0.9", "present"): "printed without its minus sign",
    }
    for k, r in enumerate(rows):
        note = notes.get((r.x, r.source), "")
        if r.x == "0.9":
            note = "; ".join(filter(None, [note, "abscissa printed as 0.1"]))
        if note:
            rows[k] = RefRow(r.x, r.value, r.source, r.params, note)
    return tuple(rows)


_T6 = _cols(
    ["0.1", "0.3", "0.5", "0.7", "1.0", "1.5", "2.0"],
    present=["0.998334998549872", "0.985133946938390", "0.959352715810926", "0.922170348514590",
             "0.848654111411546", "0.695367147241325", "0.529836429310169"],
    Horedt=["0.9983350", None, "0.9593527", None, "0.8486541", None, None],
    BFC=["0.99833499854", None, "0.95935271580", None, "0.84865411140", None, None],
    GFCFs=["0.99833499986", None, "0.95935271585", None, "0.84865409603", None, None],
)

_T7 = _cols(
    ["0.1", "0.2", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9"],
    Alias=["0.09597247", "0.19218506", "0.28887905", "0.38629807", "0.48441684",
           "0.58428140", "0.68525684", "0.78807945", "0.89292601"],
    Feng=["0.0959477541", "0.1921352537", "0.2888034214", "0.3861955524", "0.4845585473",
          "0.5841442013", "0.6852105701", "0.7880234321", "0.8928578710"],
    present=["0.095944350620621", "0.192128750320282", "0.288794404891654", "0.386184851707410",
             "0.484547171441282", "0.584133256467667", "0.685201157498259", "0.788016532411673",
             "0.892854224345211"],
    residual=["3.18e-13", "6.98e-12", "1.04e-10", "7.44e-10", "3.63e-09",
              "1.49e-08", "5.56e-08", "1.91e-07", "6.07e-07"],
)

_MP = MappingProxyType

TABLES: tuple[ReferenceTable, ...] = (
    ReferenceTable(1, "squeezing-flow", "df", 15, _T1, SQUEEZE, _MP({"present": 15, "VIM": 6})),
    ReferenceTable(2, "squeezing-flow", "theta", 15, _T2, SQUEEZE, _MP({"present": 15, "VIM": 6})),
    ReferenceTable(3, "squeezing-flow", "nusselt", 15, _T3, SQUEEZE, _MP({"present": 18, "VIM": 6})),
    ReferenceTable(4, "lane-emden-type", "y", 40, _T4, _MP({}), _MP({"exact": 21, "present": 21, "HFC": 10})),
    ReferenceTable(5, "abel", "y", 10, _t5(), _MP({}), _MP({"present": 10, "FCFs": 4})),
    ReferenceTable(6, "lane-emden-standard", "y", 12, _T6, _MP({}),
                   _MP({"present": 15, "Horedt": 7, "BFC": 11, "GFCFs": 11})),
    ReferenceTable(7, "troesch", "y", 10, _T7, _MP({"gamma": "0.5"}),
                   _MP({"present": 15, "Alias": 8, "Feng": 10})),
)


def reference_tables() -> tuple[ReferenceTable, ...]:
    return TABLES


def table(number: int) -> ReferenceTable:
    for t in TABLES:
        if t.table == number:
            return t
    raise KeyError(f"no reference table {number}")
