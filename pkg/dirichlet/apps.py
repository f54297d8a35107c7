from django.apps import AppConfig


class DirichletConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "dirichlet"
    verbose_name = "General Dirichlet series"
