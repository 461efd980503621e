from django.urls import path
from . import views

app_name = 'misreading'

urlpatterns = [
    path('derive/', views.DeriveView.as_view(), name='derive'),
    path('allowed/', views.SubstitutionView.as_view(), name='allowed'),
    path('diff/', views.DiffView.as_view(), name='diff'),
    path('count/', views.CountView.as_view(), name='count'),
]
