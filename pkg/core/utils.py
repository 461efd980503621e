from rest_framework.response import Response
from rest_framework import status

from .exceptions import CrystalEngineError


def custom_exception_handler(exc, context):
    """
    Custom exception handler for consistent error responses
    """
    from rest_framework.views import exception_handler

    if isinstance(exc, CrystalEngineError):
        return error_response(
            message=str(exc),
            details={'type': type(exc).__name__},
            status_code=status.HTTP_400_BAD_REQUEST,
        )

    response = exception_handler(exc, context)

    if response is not None:
        custom_response = {
            'status': 'error',
            'code': response.status_code,
            'message': 'An error occurred',
            'details': response.data
        }
        response.data = custom_response

    return response


def success_response(data=None, message="Success", status_code=status.HTTP_200_OK):
    """
    Standard success response format
    """
    response_data = {
        'status': 'success',
        'message': message,
    }
    if data is not None:
        response_data['data'] = data
    return Response(response_data, status=status_code)


def error_response(message="An error occurred", details=None, status_code=status.HTTP_400_BAD_REQUEST):
    """
    Standard error response format
    """
    response_data = {
        'status': 'error',
        'message': message,
    }
    if details is not None:
        response_data['details'] = details
    return Response(response_data, status=status_code)


def parse_flag(value, default=None):
    """Read an on/off style flag from a query parameter or CLI option."""
    if value is None or value == '':
        return default
    if isinstance(value, bool):
        return value
    lowered = str(value).strip().lower()
    if lowered in ('1', 'true', 'on', 'yes'):
        return True
    if lowered in ('0', 'false', 'off', 'no'):
        return False
    raise ValueError(f"Expected on/off, got {value!r}")
