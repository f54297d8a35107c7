from django.apps import AppConfig


class RoucheConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "rouche"
    verbose_name = "Rouché localization"
