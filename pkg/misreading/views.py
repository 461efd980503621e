import logging

from rest_framework import generics
from rest_framework.permissions import AllowAny

from core.utils import error_response, success_response

from .serializers import (
    CountQuerySerializer,
    DeriveQuerySerializer,
    DiffQuerySerializer,
    SubstitutionQuerySerializer,
)
from .services import DerivationConfig, MisreadingService

logger = logging.getLogger(__name__)


class QueryView(generics.GenericAPIView):
    """Validates query parameters with ``serializer_class`` before handling."""
    permission_classes = [AllowAny]

    def validated_query(self, request):
        serializer = self.get_serializer(data=request.query_params)
        if not serializer.is_valid():
            return serializer, error_response(message='Invalid query parameters', details=serializer.errors)
        return serializer, None


class DeriveView(QueryView):
    """
    Run the error levels and return every partition, merge and warning.
    """
    serializer_class = DeriveQuerySerializer

    def get(self, request):
        serializer, error = self.validated_query(request)
        if error:
            return error
        config = DerivationConfig.from_settings(**serializer.config_overrides())
        data = MisreadingService.derive_payload(
            config,
            max_level=serializer.validated_data['level'],
            annotate=serializer.validated_data['annotate'],
        )
        return success_response(data=data)


class SubstitutionView(QueryView):
    serializer_class = SubstitutionQuerySerializer

    def get(self, request):
        serializer, error = self.validated_query(request)
        if error:
            return error
        params = serializer.validated_data
        config = DerivationConfig.from_settings(**serializer.config_overrides())
        pairs = MisreadingService.substitutions(config, params['level'], params.get('family'), params['which'])
        return success_response(data={
            'scheme': config.scheme.value,
            'level': params['level'],
            'family': params.get('family'),
            params['which']: pairs,
            'count': len(pairs),
        })


class DiffView(QueryView):
    serializer_class = DiffQuerySerializer

    def get(self, request):
        serializer, error = self.validated_query(request)
        if error:
            return error
        config = DerivationConfig.from_settings(**serializer.config_overrides())
        data = MisreadingService.diff(config, serializer.validated_data['table'], serializer.validated_data['level'])
        return success_response(data=data)


class CountView(QueryView):
    serializer_class = CountQuerySerializer

    def get(self, request):
        serializer, error = self.validated_query(request)
        if error:
            return error
        return success_response(data=MisreadingService.count(serializer.validated_data['candidate']))
