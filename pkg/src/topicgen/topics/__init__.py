from topicgen.topics.lda import LdaModel, SyntheticCorpus, infer_doc_topics, lda_generate, train_lda
from topicgen.topics.lsi import LsiModel, train_lsi
from topicgen.topics.priors import TopicPrior, topic_prior
from topicgen.topics.store import load_topic_model, save_topic_model
from topicgen.topics.sweep import SweepRow, sweep, write_sweep_csv

__all__ = [
    "LdaModel",
    "LsiModel",
    "SyntheticCorpus",
    "SweepRow",
    "TopicPrior",
    "infer_doc_topics",
    "lda_generate",
    "load_topic_model",
    "save_topic_model",
    "sweep",
    "topic_prior",
    "train_lda",
    "train_lsi",
    "write_sweep_csv",
]
