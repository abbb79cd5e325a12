import pytest

from strokescreen.nn.train import TrainConfig
from strokescreen.pipelines import (
    eval_vocal,
    train_face,
    train_fusion_rows,
    train_retina,
    train_vascular,
    train_vocal,
)
from strokescreen.metrics import compute_metrics
from strokescreen.service.core import ModelBundle
from strokescreen.synth import (
    CorpusSpec,
    gen_face,
    gen_fusion,
    gen_retina,
    gen_vitals,
    gen_vocal,
)


@pytest.fixture(scope="session")
def tiny_bundle():
    """Small difficulty-0 models, good enough to make synthetic positives
    score high and negatives low; used by service/API tests."""
    vocal = train_vocal(
        gen_vocal(CorpusSpec("vocal", 6, 0.0, seed=900)),
        TrainConfig(learning_rate=0.02, epochs=14, batch_size=6, seed=0),
    )
    retina = train_retina(
        gen_retina(CorpusSpec("retina", 6, 0.0, seed=901)),
        TrainConfig(learning_rate=0.02, epochs=12, batch_size=6, seed=0),
    )
    face = train_face(gen_face(CorpusSpec("face", 20, 0.0, seed=902)))
    vascular = train_vascular(gen_vitals(CorpusSpec("vascular", 30, 0.0, seed=903)))
    fusion = train_fusion_rows(gen_fusion(CorpusSpec("fusion", 60, 0.0, seed=904)))
    bundle = ModelBundle(
        vocal=vocal, retina=retina, face=face, vascular=vascular, fusion=fusion
    )
    # the service tests lean on directional correctness; fail loudly here
    # rather than mysteriously there
    acc = compute_metrics(
        eval_vocal(vocal, gen_vocal(CorpusSpec("vocal", 5, 0.0, seed=905)))
    ).accuracy
    assert acc >= 0.8, f"tiny vocal model unexpectedly weak ({acc})"
    return bundle
