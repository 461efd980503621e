"""
URL configuration for genetic_crystal_server project.

The `urlpatterns` list routes URLs to views. For more information please see:
    https://docs.djangoproject.com/en/4.2/topics/http/urls/
"""
from django.urls import path, include

urlpatterns = [
    path('api/core/', include('core.urls')),
    path('api/crystals/', include('crystals.urls')),
    path('api/misreading/', include('misreading.urls')),
]
