import logging

from rest_framework import permissions, status
from rest_framework.response import Response
from rest_framework.views import APIView

from symbolic.exceptions import EngineError, InputError

from .serializers import RunConfigSerializer
from .services import run_command
from .swagger_decorators import engine_operation

logger = logging.getLogger(__name__)


class EngineRunView(APIView):
    """
    Runs one engine command; the URL fixes the command.
    """
    permission_classes = [permissions.AllowAny]
    command = None

    def run(self, request):
        data = {**request.data, 'command': self.command}
        serializer = RunConfigSerializer(data=data)
        serializer.is_valid(raise_exception=True)
        try:
            report = run_command(serializer.validated_data)
        except InputError as exc:
            return Response(exc.to_dict(), status=status.HTTP_400_BAD_REQUEST)
        except EngineError as exc:
            logger.error(f"{self.command} aborted: {exc}")
            return Response(exc.to_dict(), status=status.HTTP_500_INTERNAL_SERVER_ERROR)
        if not report.passed:
            logger.warning(f"{self.command}: {len(report.failures)} failed checks")
        return Response(report.to_dict(), status=status.HTTP_200_OK)


class ComputeView(EngineRunView):
    command = 'compute'

    @engine_operation(
        operation_summary="Compute Invariant",
        operation_description="Expression of an invariant, generic or for a graphing function phi",
    )
    def post(self, request):
        return self.run(request)


class VerifyView(EngineRunView):
    command = 'verify'

    @engine_operation(
        operation_summary="Verify Identities",
        operation_description="Run an identity suite (or all) with a seed and trial count",
    )
    def post(self, request):
        return self.run(request)


class EvalView(EngineRunView):
    command = 'eval'

    @engine_operation(
        operation_summary="Evaluate Invariant",
        operation_description="Exact (and optionally double-precision) value at a point",
    )
    def post(self, request):
        return self.run(request)
