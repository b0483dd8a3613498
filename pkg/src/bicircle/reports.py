"""Residual reports produced by every verification routine."""
import json
from dataclasses import asdict, dataclass, field

import numpy as np

DEFAULT_TOL = 1e-8


@dataclass
class Residual:
    relation: str
    level: tuple
    residual: float
    tol: float
    passed: bool
    vacuous: bool = False
    # advisory entries are reported but never decide pass/fail
    advisory: bool = False

    def to_dict(self):
        d = asdict(self)
        d["level"] = list(self.level)
        d["pass"] = d.pop("passed")
        return d


@dataclass
class ResidualReport:
    entries: list = field(default_factory=list)

    def add(self, relation, level, residual, tol, vacuous=False, advisory=False):
        residual = float(residual)
        ok = vacuous or (np.isfinite(residual) and residual <= tol)
        self.entries.append(Residual(relation, tuple(int(x) for x in level), residual,
                                     float(tol), bool(ok), vacuous, advisory))

    def vacuous(self, relation, level, tol):
        self.add(relation, level, 0.0, tol, vacuous=True)

    def extend(self, other):
        self.entries.extend(other.entries)
        return self

    @property
    def passed(self):
        return all(e.passed for e in self.entries if not e.advisory)

    @property
    def failures(self):
        return [e for e in self.entries if not e.passed and not e.advisory]

    def max_residual(self, relation=None):
        vals = [e.residual for e in self.entries
                if not e.vacuous and not e.advisory and (relation is None or e.relation == relation)]
        return max(vals, default=0.0)

    def relations(self):
        return sorted({e.relation for e in self.entries})

    def sorted(self):
        return ResidualReport(sorted(self.entries, key=lambda e: (e.relation, e.level)))

    def to_json(self):
        return [e.to_dict() for e in self.sorted().entries]

    def dumps(self):
        return json.dumps(self.to_json(), indent=1)

    def summary(self):
        lines = []
        for rel in self.relations():
            es = [e for e in self.entries if e.relation == rel]
            live = [e for e in es if not e.vacuous]
            worst = max((e.residual for e in live), default=0.0)
            ok = all(e.passed for e in es)
            tag = "advisory" if all(e.advisory for e in es) else ("PASS" if ok else "FAIL")
            lines.append(f"{tag:8s} {rel:28s} levels={len(live):3d} vacuous={len(es) - len(live):3d} "
                         f"max={worst:.3e}")
        return "\n".join(lines)
