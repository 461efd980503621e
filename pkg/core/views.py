from django.conf import settings
from django.utils import timezone
from rest_framework import generics
from rest_framework.permissions import AllowAny

from .utils import success_response


class HealthCheckView(generics.GenericAPIView):
    """
    Basic health check endpoint
    """
    permission_classes = [AllowAny]

    def get(self, request):
        engine = settings.GENETIC_CRYSTAL
        data = {
            'status': 'healthy',
            'timestamp': timezone.now().isoformat(),
            'service': 'Genetic Crystal Engine',
            'version': '1.0.0',
            'default_scheme': engine['DEFAULT_SCHEME'],
            'damping': engine['DAMPING'],
        }
        return success_response(data=data)
