from django.test import TestCase
from rest_framework.test import APIClient


class ApiRootTests(TestCase):

    def test_root_lists_endpoints(self):
        response = APIClient().get('/api/')
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.data['status'], 'ok')
        self.assertEqual(len(response.data['configs']), 15)
        self.assertIn('verificar', response.data['endpoints']['certificados'])
