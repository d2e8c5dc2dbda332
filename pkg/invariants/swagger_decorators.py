"""
Swagger decorators for engine endpoints
"""

from drf_yasg import openapi
from drf_yasg.utils import swagger_auto_schema

from .serializers import ReportSerializer, RunConfigSerializer

# Common engine responses
report_response = openapi.Response(
    'Report - "passed" is false when an identity check failed',
    ReportSerializer,
    examples={
        'application/json': {
            'command': 'compute',
            'config': {'command': 'compute', 'invariant': 'P', 'phi': 'z*zb'},
            'seed': None,
            'version': '1.0.0',
            'passed': True,
            'checks': [],
            'results': {'P': '0'},
            'timings': {'checks': 0, 'trials': 0, 'work': 0},
        }
    }
)

input_error_response = openapi.Response(
    'Bad Request - invalid configuration or input',
    examples={
        'application/json': {
            'error': 'SourceSyntaxError',
            'message': "unexpected ')' at 4:5",
            'span': [4, 5],
        }
    }
)


def engine_operation(**kwargs):
    """
    Decorator for endpoints that take a RunConfig body and return a Report
    """
    default_responses = {
        200: report_response,
        400: input_error_response,
    }

    # Merge with custom responses if provided
    responses = kwargs.get('responses', {})
    responses.update(default_responses)
    kwargs['responses'] = responses

    kwargs.setdefault('request_body', RunConfigSerializer)
    kwargs['tags'] = kwargs.get('tags', []) + ['Engine']

    return swagger_auto_schema(**kwargs)
