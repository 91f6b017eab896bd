"""
Test data factories.
"""
from datetime import datetime, timezone

import factory
import numpy as np
from factory.django import DjangoModelFactory

from src.domain.contours.entities import JM
from src.domain.plateau.entities import SolverConfig
from src.domain.runs.entities import KilledPeriod, RunConfig, RunRecord, RunStatus
from src.domain.shared.types import ConfigHash
from src.domain.symmetry.entities import EndDescriptor
from src.infrastructure.runs.models import KilledPeriodModel, RunRecordModel


class SolverConfigFactory(factory.Factory):
    class Meta:
        model = SolverConfig

    max_iterations = 200
    edge_length = 0.5
    check_embedding = False


class RunConfigFactory(factory.Factory):
    class Meta:
        model = RunConfig

    family = factory.LazyFunction(lambda: JM(3))
    schedule = (2.0, 3.0, 4.0)
    solver = factory.SubFactory(SolverConfigFactory)
    output_directory = "runs"


class HorizontalEndFactory(factory.Factory):
    """Radial catenoid end with a horizontal normal at a given azimuth."""

    class Meta:
        model = EndDescriptor

    class Params:
        azimuth = 0.0
        w = 1.0

    normal = factory.LazyAttribute(
        lambda o: np.array([np.cos(o.azimuth), np.sin(o.azimuth), 0.0])
    )
    axis_point = factory.LazyFunction(lambda: np.zeros(3))
    axis_direction = factory.LazyAttribute(lambda o: o.normal)
    weight = factory.LazyAttribute(lambda o: o.w * o.normal)


class RunRecordFactory(factory.Factory):
    class Meta:
        model = RunRecord

    config_hash = factory.Sequence(lambda k: ConfigHash(f"{k:064x}"))
    family = "JM"
    status = RunStatus.PASSED
    verdict = "VERDICT JM n=3"


class KilledPeriodFactory(factory.Factory):
    class Meta:
        model = KilledPeriod

    family = "P0"
    n = 2
    angle_or_weight = factory.Sequence(lambda k: 0.5 + 0.01 * k)
    schedule = (4.0, 8.0, 16.0)
    tolerances = factory.LazyFunction(lambda: {"period_tolerance": 1e-3})
    parameters = factory.LazyFunction(lambda: {"s": 1.2, "t": 0.8})
    residual = 1e-5


class RunRecordModelFactory(DjangoModelFactory):
    class Meta:
        model = RunRecordModel

    config_hash = factory.Sequence(lambda k: f"{k:064x}")
    family = "JM"
    started_at = factory.LazyFunction(lambda: datetime.now(timezone.utc))
    status = "passed"
    verdict = "VERDICT JM n=3"
    stages = factory.LazyFunction(list)
    manifest = factory.LazyFunction(dict)


class KilledPeriodModelFactory(DjangoModelFactory):
    class Meta:
        model = KilledPeriodModel

    cache_key = factory.Sequence(lambda k: f"{k:064x}")
    family = "P0"
    n = 2
    angle_or_weight = 0.7853981633974483
    schedule = factory.LazyFunction(lambda: [4.0, 8.0, 16.0])
    tolerances = factory.LazyFunction(dict)
    parameters = factory.LazyFunction(lambda: {"s": 1.0, "t": 1.0})
    residual = 0.0
