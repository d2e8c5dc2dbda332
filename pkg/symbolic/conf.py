"""
Engine settings with Django-backed overrides
"""
from django.conf import settings

DEFAULTS = {
    'SEED': 7,
    'TRIALS': 20,
    'SAMPLE_BOUND': 97,
    'NODE_BUDGET': 5_000_000,
    'MAX_ORDER': 8,
    'RETRY_BUDGET': 64,
    'RENDER_LIMIT': 200_000,
}


def engine_setting(name):
    """
    Read a knob from settings.CR_ENGINE, falling back to DEFAULTS
    when Django is not configured.
    """
    if settings.configured:
        overrides = getattr(settings, 'CR_ENGINE', {})
        if name in overrides:
            return overrides[name]
    return DEFAULTS[name]
