"""followdrop: predicts which accounts are likely to shed followers.

Feature extraction (content, temporal, network, psycholinguistic),
topic/embedding models and an MLP classifier evaluated with stratified
cross-validation, plus a synthetic-corpus generator for end-to-end
verification.
"""

__version__ = "0.1.0"
