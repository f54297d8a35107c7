from django.db import models


class ExperimentRun(models.Model):
    """One invocation of the zetalab command"""

    STATUS_CHOICES = [
        ("running", "Running"),
        ("succeeded", "Succeeded"),
        ("failed", "Failed"),
    ]

    command = models.CharField(max_length=50)
    config = models.JSONField(default=dict, blank=True)  # Resolved RunConfig
    status = models.CharField(max_length=20, choices=STATUS_CHOICES, default="running")
    summary = models.JSONField(default=dict, blank=True)
    exit_code = models.IntegerField(null=True, blank=True)
    error = models.TextField(blank=True)
    output_path = models.CharField(max_length=500, blank=True)

    started_at = models.DateTimeField(auto_now_add=True)
    finished_at = models.DateTimeField(null=True, blank=True)

    class Meta:
        ordering = ["-started_at", "-id"]
        indexes = [
            models.Index(fields=["command", "-started_at"], name="experiments_command_idx"),
            models.Index(fields=["status", "-started_at"], name="experiments_status_idx"),
        ]

    def __str__(self):
        return f"{self.command} ({self.status}) - {self.started_at:%Y-%m-%d %H:%M}"

    @property
    def duration(self):
        if self.finished_at is None:
            return None
        return (self.finished_at - self.started_at).total_seconds()
