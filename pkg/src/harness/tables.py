"""Published error tables and the acceptance checks run against them."""

from dataclasses import dataclass
from typing import Dict, List, Literal, Mapping, Optional, Sequence, Tuple

from src.config import TableId
from src.utils.errors import InvalidArgumentError

CheckKind = Literal["upper", "lower", "ratio", "factor"]


@dataclass(frozen=True)
class TableRow:
    label: str
    column: str
    preset: str
    overrides: Tuple[str, ...] = ()
    published: Optional[float] = None

    @property
    def key(self) -> str:
        return f"{self.label} [{self.column}]" if self.column else self.label


@dataclass(frozen=True)
class Check:
    """A bound on one row's error, relative to a constant, another row, or the published value.

    ``upper``: ``a <= bound``; ``lower``: ``a >= bound``; ``ratio``: ``a <= bound * b``;
    ``factor``: ``a`` within a factor ``bound`` of its published value.
    """

    kind: CheckKind
    a: str
    bound: float
    b: Optional[str] = None
    required: bool = True

    def evaluate(self, results: Mapping[str, float], published: Mapping[str, float], tolerance: float = 1.0) -> bool:
        value = results[self.a]
        if self.kind == "upper":
            return value <= self.bound * tolerance
        if self.kind == "lower":
            return value >= self.bound
        if self.kind == "ratio":
            return value <= self.bound * results[self.b]
        factor = self.bound * tolerance
        return published[self.a] / factor <= value <= published[self.a] * factor

    def describe(self, tolerance: float = 1.0) -> str:
        if self.kind == "upper":
            return f"{self.a} <= {self.bound * tolerance:g}"
        if self.kind == "lower":
            return f"{self.a} >= {self.bound:g}"
        if self.kind == "ratio":
            return f"{self.a} <= {self.bound:g} x {self.b}"
        return f"{self.a} within x{self.bound * tolerance:g} of published"


@dataclass(frozen=True)
class Table:
    id: str
    rows: Tuple[TableRow, ...]
    checks: Tuple[Check, ...] = ()

    def row(self, key: str) -> TableRow:
        for row in self.rows:
            if row.key == key:
                return row
        raise InvalidArgumentError(f"table {self.id} has no row {key!r}")

    def required_rows(self) -> List[TableRow]:
        """Rows that some required check reads."""
        keys = {c.a for c in self.checks if c.required} | {c.b for c in self.checks if c.required and c.b}
        return [row for row in self.rows if row.key in keys]

    @property
    def published(self) -> Dict[str, float]:
        return {row.key: row.published for row in self.rows if row.published is not None}


def _levels(total: Sequence[int]) -> str:
    return f"model.levels=[{', '.join(str(t) for t in total)}]"


def _data2() -> Table:
    rows = (
        TableRow("KAN-1", "", "data2-fixed", (_levels([1]),), 0.236),
        TableRow("FBKAN-1", "", "data2-fixed", (_levels([4]),), 0.0743),
        TableRow("KAN-2", "", "data2-extension", (_levels([1]),), 0.081),
        TableRow("FBKAN-2", "", "data2-extension", (_levels([4]),), 0.0227),
    )
    checks = tuple(Check("factor", row.key, 2.0) for row in rows) + (
        Check("ratio", "FBKAN-1", 1.0, "KAN-1"),
        Check("ratio", "FBKAN-2", 1.0, "KAN-2"),
    )
    return Table("data2", rows, checks)


HELMHOLTZ_COLUMNS = {"a1=1,a2=4": (1, 4), "a1=4,a2=4": (4, 4), "a1=6,a2=6": (6, 6)}


def _pi2() -> Table:
    published = {
        ("KAN-1", "helmholtz-fixed", (1,)): (0.0259, 0.5465, 1.1254),
        ("FBKAN-1 L=4", "helmholtz-fixed", (4,)): (0.0102, 0.0267, 0.1151),
        ("FBKAN-1 L=9", "helmholtz-fixed", (9,)): (0.0213, 0.0239, 0.0399),
        ("FBKAN-1 L=16", "helmholtz-fixed", (16,)): (0.0037, 0.0128, 0.0321),
        ("KAN-2", "helmholtz-extension", (1,)): (0.0180, 0.2045, 0.5854),
        ("FBKAN-2", "helmholtz-extension", (4,)): (0.0112, 0.0427, 0.2272),
        ("KAN-3", "helmholtz-narrow", (1,)): (0.3771, 0.5488, 1.2825),
        ("FBKAN-3", "helmholtz-narrow", (4,)): (0.0214, 0.2760, 0.9797),
    }
    rows = tuple(
        TableRow(label, column, preset, (_levels(levels), f"problem.params.a1={a1}", f"problem.params.a2={a2}"), value)
        for (label, preset, levels), values in published.items()
        for (column, (a1, a2)), value in zip(HELMHOLTZ_COLUMNS.items(), values)
    )
    checks = (
        Check("upper", "FBKAN-1 L=4 [a1=4,a2=4]", 0.06),
        Check("lower", "KAN-1 [a1=4,a2=4]", 0.30),
        Check("upper", "FBKAN-1 L=16 [a1=1,a2=4]", 0.02),
    )
    return Table("pi2", rows, checks)


def _ml_pi() -> Table:
    columns = {
        "a=8": ("ml-helmholtz", ("problem.params.a=8",)),
        "a=10": ("ml-helmholtz", ("problem.params.a=10",)),
        "M=5": ("ml-laplacian", ("problem.params.M=5",)),
    }
    published = {
        ("KAN", (1,)): (0.89089, 0.92729, 1.08556),
        ("FBKAN L=4", (4,)): (0.91962, 0.87100, 0.33474),
        ("FBKAN L=16", (16,)): (0.28707, 0.72251, 0.04175),
        ("FBKAN L=36", (36,)): (0.33562, 0.51766, 0.09343),
        ("MLFBKAN N=2", (1, 4)): (0.24593, 0.87294, 0.10461),
        ("MLFBKAN N=3", (1, 4, 16)): (0.06353, 0.27380, 0.02926),
        ("MLFBKAN N=4", (1, 4, 16, 36)): (0.04231, 0.12012, 0.03066),
    }
    rows = tuple(
        TableRow(label, column, preset, (_levels(levels), *params), value)
        for (label, levels), values in published.items()
        for (column, (preset, params)), value in zip(columns.items(), values)
    )
    checks = (
        Check("upper", "MLFBKAN N=3 [a=8]", 0.15),
        Check("ratio", "MLFBKAN N=3 [a=8]", 0.5, "FBKAN L=16 [a=8]"),
        Check("upper", "FBKAN L=16 [M=5]", 0.10),
        Check("ratio", "MLFBKAN N=3 [M=5]", 1.0, "FBKAN L=4 [M=5]"),
    )
    return Table("ml-pi", rows, checks)


def _wave() -> Table:
    rows = (
        TableRow("KAN", "c=sqrt2", "wave-c-sqrt2", (_levels([1]),), 0.1402),
        TableRow("FBKAN L=4", "c=sqrt2", "wave-c-sqrt2", (_levels([4]),), 0.0153),
        TableRow("KAN", "c=2", "wave-c-2", (_levels([1]),), 0.1778),
        TableRow("FBKAN L=4", "c=2", "wave-c-2", (_levels([4]),), 0.0587),
    )
    checks = (
        Check("upper", "FBKAN L=4 [c=sqrt2]", 0.05),
        Check("ratio", "FBKAN L=4 [c=sqrt2]", 1.0, "KAN [c=sqrt2]"),
        Check("upper", "FBKAN L=4 [c=2]", 0.12, required=False),
    )
    return Table("wave", rows, checks)


def _physics1() -> Table:
    rows = (
        TableRow("KAN", "", "physics1", (_levels([1]),), 0.2407),
        TableRow("FBKAN L=4", "", "physics1", (_levels([4]),), 0.0898),
        TableRow("FBKAN L=8", "", "physics1", (_levels([8]),), 0.0369),
    )
    checks = (
        Check("upper", "FBKAN L=8", 0.10),
        Check("ratio", "FBKAN L=8", 1 / 1.5, "KAN"),
    )
    return Table("physics1", rows, checks)


TABLES: Dict[str, Table] = {t.id: t for t in (_data2(), _pi2(), _ml_pi(), _wave(), _physics1())}


def get_table(table_id: TableId) -> Table:
    try:
        return TABLES[table_id]
    except KeyError:
        raise InvalidArgumentError(f"unknown table {table_id!r}, expected one of {sorted(TABLES)}") from None
