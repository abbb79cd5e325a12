"""Three-tier multimodal stroke screening pipeline.

Subpackages/modules:
    nn       differentiable-layer kernel with SGD training and grad checking
    svm      linear max-margin classifier with sigmoid probability calibration
    audio    WAV decoding, low-pass filtering, the slurred-voice detector
    vision   PGM/PPM decoding, preprocessing, the retinopathy detector
    face     68-point landmark features and the facial-paralysis detector
    vitals   threshold triage over vitals streams plus the vascular detector
    fusion   final risk fusion over the four modality confidences
    metrics  confusion-matrix metrics and report tables
    synth    seeded synthetic corpora with construction-time labels
    service  session state machine, event store, HTTP API, and CLI
"""

__version__ = "0.1.0"
