from django.urls import path
from . import views

app_name = 'crystals'

urlpatterns = [
    path('codons/', views.CodonTableView.as_view(), name='codon-table'),
    path('dinucleotides/', views.DinucleotideTableView.as_view(), name='dinucleotide-table'),
    path('connect/', views.ConnectView.as_view(), name='connect'),
]
