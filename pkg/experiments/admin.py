from django.contrib import admin

from .models import ExperimentRun


@admin.register(ExperimentRun)
class ExperimentRunAdmin(admin.ModelAdmin):
    list_display = ["command", "status", "exit_code", "started_at", "finished_at", "output_path"]
    list_filter = ["command", "status", "started_at"]
    search_fields = ["command", "error", "output_path"]
    readonly_fields = [
        "command",
        "config",
        "status",
        "summary",
        "exit_code",
        "error",
        "output_path",
        "started_at",
        "finished_at",
    ]
    date_hierarchy = "started_at"

    def has_add_permission(self, request):
        return False

    def has_change_permission(self, request, obj=None):
        return False
