from django.urls import path
from . import views

app_name = 'invariants_api'

urlpatterns = [
    path('compute/', views.ComputeView.as_view(), name='compute'),
    path('verify/', views.VerifyView.as_view(), name='verify'),
    path('eval/', views.EvalView.as_view(), name='eval'),
]
