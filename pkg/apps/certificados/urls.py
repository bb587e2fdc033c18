from django.urls import path

from . import views

app_name = 'certificados'

urlpatterns = [
    path('verificar/', views.verificar, name='verificar'),
]
