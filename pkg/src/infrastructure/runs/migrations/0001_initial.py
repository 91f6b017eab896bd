# Generated by Django 5.0 on 2026-10-19 09:12

from django.db import migrations, models


class Migration(migrations.Migration):
    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="RunRecordModel",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("config_hash", models.CharField(max_length=64, unique=True)),
                ("family", models.CharField(max_length=16)),
                ("started_at", models.DateTimeField()),
                ("finished_at", models.DateTimeField(blank=True, null=True)),
                (
                    "status",
                    models.CharField(
                        choices=[
                            ("running", "Running"),
                            ("passed", "Passed"),
                            ("failed", "Failed"),
                        ],
                        default="running",
                        max_length=16,
                    ),
                ),
                ("verdict", models.TextField(blank=True, null=True)),
                ("stages", models.JSONField(default=list)),
                ("manifest", models.JSONField(default=dict)),
            ],
            options={
                "db_table": "run_records",
                "indexes": [
                    models.Index(fields=["family"], name="run_records_family_5b1c2e_idx"),
                    models.Index(
                        fields=["started_at"], name="run_records_started_8f0a41_idx"
                    ),
                ],
            },
        ),
        migrations.CreateModel(
            name="KilledPeriodModel",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("cache_key", models.CharField(max_length=64, unique=True)),
                ("family", models.CharField(max_length=16)),
                ("n", models.PositiveIntegerField()),
                ("angle_or_weight", models.FloatField()),
                ("schedule", models.JSONField(default=list)),
                ("tolerances", models.JSONField(default=dict)),
                ("parameters", models.JSONField(default=dict)),
                ("residual", models.FloatField()),
                ("created_at", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "db_table": "killed_periods",
                "indexes": [
                    models.Index(
                        fields=["family", "n"], name="killed_peri_family_3d7e90_idx"
                    ),
                ],
            },
        ),
    ]
