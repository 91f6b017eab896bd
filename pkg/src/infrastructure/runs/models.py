"""
Django models of the run cache.
"""
from django.db import models


class RunRecordModel(models.Model):
    """
    Django run record model.

    This is the infrastructure implementation of the RunRecord domain entity.
    """

    STATUS_CHOICES = [
        ("running", "Running"),
        ("passed", "Passed"),
        ("failed", "Failed"),
    ]

    config_hash = models.CharField(max_length=64, unique=True)
    family = models.CharField(max_length=16)
    started_at = models.DateTimeField()
    finished_at = models.DateTimeField(null=True, blank=True)
    status = models.CharField(max_length=16, choices=STATUS_CHOICES, default="running")
    verdict = models.TextField(null=True, blank=True)
    stages = models.JSONField(default=list)
    manifest = models.JSONField(default=dict)

    class Meta:
        db_table = "run_records"
        indexes = [
            models.Index(fields=["family"], name="run_records_family_5b1c2e_idx"),
            models.Index(fields=["started_at"], name="run_records_started_8f0a41_idx"),
        ]

    def __str__(self) -> str:
        return f"Run {self.config_hash[:12]} - {self.family} ({self.status})"


class KilledPeriodModel(models.Model):
    """Parameters found by a period search, or an empirical JMV threshold."""

    cache_key = models.CharField(max_length=64, unique=True)
    family = models.CharField(max_length=16)
    n = models.PositiveIntegerField()
    angle_or_weight = models.FloatField()
    schedule = models.JSONField(default=list)
    tolerances = models.JSONField(default=dict)
    parameters = models.JSONField(default=dict)
    residual = models.FloatField()
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        db_table = "killed_periods"
        indexes = [
            models.Index(fields=["family", "n"], name="killed_peri_family_3d7e90_idx"),
        ]

    def __str__(self) -> str:
        return f"{self.family} n={self.n} at {self.angle_or_weight:g}"
