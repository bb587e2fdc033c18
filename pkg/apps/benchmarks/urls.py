from django.urls import path, include
from rest_framework.routers import DefaultRouter

from .views import BenchmarkRunViewSet, RunRecordViewSet

app_name = 'benchmarks'

router = DefaultRouter()
router.register('runs', BenchmarkRunViewSet, basename='run')
router.register('records', RunRecordViewSet, basename='record')

urlpatterns = [
    path('', include(router.urls)),
]
