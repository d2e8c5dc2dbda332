"""
Check verdicts and the deterministic JSON report
"""
import json
from dataclasses import dataclass, field
from typing import Optional

ENGINE_VERSION = '1.0.0'

PASS, FAIL, FLAGGED = 'pass', 'fail', 'flagged'

# identity checks fail a run; display checks audit transcribed formulas
IDENTITY, DISPLAY, OBSERVATION = 'identity', 'display', 'observation'


@dataclass
class Check:
    name: str
    status: str
    kind: str = IDENTITY
    mode: str = ''
    trials: int = 0
    witness: Optional[dict] = None
    residual: Optional[str] = None
    position: Optional[str] = None
    work: int = 0
    detail: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status != FAIL

    @classmethod
    def from_outcome(cls, name, zero, kind=IDENTITY, **kwargs):
        if zero:
            status = PASS
        else:
            status = FLAGGED if kind == DISPLAY else FAIL
        return cls(name=name, status=status, kind=kind, **kwargs)

    @classmethod
    def from_verdict(cls, name, verdict, kind=IDENTITY, **kwargs):
        """
        Wrap a zerotest Verdict.
        """
        return cls.from_outcome(
            name, verdict.zero, kind,
            mode=verdict.mode,
            trials=verdict.trials,
            witness=verdict.witness,
            residual=verdict.residual,
            work=verdict.work,
            **kwargs,
        )

    def to_dict(self):
        data = {
            'name': self.name,
            'status': self.status,
            'kind': self.kind,
            'mode': self.mode,
            'trials': self.trials,
            'work': self.work,
        }
        for key in ('witness', 'residual', 'position'):
            value = getattr(self, key)
            if value is not None:
                data[key] = value
        if self.detail:
            data['detail'] = self.detail
        return data


@dataclass
class Report:
    command: str
    config: dict
    seed: Optional[int] = None
    checks: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    version: str = ENGINE_VERSION

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    @property
    def failures(self):
        return [check for check in self.checks if check.status == FAIL]

    @property
    def flagged(self):
        return [check for check in self.checks if check.status == FLAGGED]

    def extend(self, checks):
        self.checks.extend(checks)
        return self

    @property
    def timings(self):
        """
        Work counters instead of wall time so the report is reproducible.
        """
        return {
            'checks': len(self.checks),
            'trials': sum(check.trials for check in self.checks),
            'work': sum(check.work for check in self.checks),
        }

    def to_dict(self):
        return {
            'command': self.command,
            'config': self.config,
            'seed': self.seed,
            'version': self.version,
            'passed': self.passed,
            'checks': [check.to_dict() for check in self.checks],
            'results': self.results,
            'timings': self.timings,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=str)
