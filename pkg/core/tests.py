from django.conf import settings
from django.test import SimpleTestCase
from rest_framework import status
from rest_framework.test import APIClient

from core.exceptions import ConfigurationError, InvalidStateError
from core.utils import custom_exception_handler, parse_flag


class HealthCheckTests(SimpleTestCase):
    def setUp(self):
        self.client = APIClient()

    def test_health_reports_engine_defaults(self):
        response = self.client.get('/api/core/health/')
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        data = response.json()['data']
        self.assertEqual(data['status'], 'healthy')
        self.assertEqual(data['default_scheme'], settings.GENETIC_CRYSTAL['DEFAULT_SCHEME'])
        self.assertEqual(data['damping'], settings.GENETIC_CRYSTAL['DAMPING'])


class ParseFlagTests(SimpleTestCase):
    def test_on_off_spellings(self):
        for value in ('on', 'ON', 'true', '1', 'yes', True):
            self.assertIs(parse_flag(value), True)
        for value in ('off', 'false', '0', 'no', False):
            self.assertIs(parse_flag(value), False)

    def test_missing_value_falls_back_to_default(self):
        self.assertIsNone(parse_flag(None))
        self.assertTrue(parse_flag('', default=True))

    def test_garbage_is_rejected(self):
        with self.assertRaises(ValueError):
            parse_flag('sometimes')


class ExceptionHandlerTests(SimpleTestCase):
    def test_engine_errors_become_bad_requests(self):
        response = custom_exception_handler(ConfigurationError('unknown scheme'), {})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertEqual(response.data['status'], 'error')
        self.assertEqual(response.data['details'], {'type': 'ConfigurationError'})

    def test_invalid_state_is_still_a_value_error(self):
        self.assertTrue(issubclass(InvalidStateError, ValueError))
