"""Arabic dialect identification toolkit.

From-scratch text classification: two-phase preprocessing (surface
cleanup + light morphology), three-analyzer n-gram TF-IDF with a
weighted union, subword skipgram/supervised embeddings, a linear SVC
trained by dual coordinate descent, and an experiment harness with
grid search, reporting, and model persistence.
"""

__version__ = "0.1.0"
