"""
URL configuration for zetalab (admin view of the run journal).
"""
from django.contrib import admin
from django.urls import path

urlpatterns = [
    path("admin/", admin.site.urls),
]
