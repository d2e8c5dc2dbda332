"""
Jet-space context shared by total derivatives and frames
"""
from dataclasses import dataclass

from symbolic.conf import engine_setting


@dataclass(frozen=True)
class JetContext:
    """
    max_order bounds a+b+c for every jet phi[a,b,c] that may appear.
    rigid declares phi independent of u, so every u-jet vanishes.
    """
    max_order: int = 8
    rigid: bool = False

    @classmethod
    def from_settings(cls, rigid=False, max_order=None):
        if max_order is None:
            max_order = engine_setting('MAX_ORDER')
        return cls(max_order=max_order, rigid=rigid)

    def derivation_key(self, direction):
        return ('total', direction, self.max_order, self.rigid)
