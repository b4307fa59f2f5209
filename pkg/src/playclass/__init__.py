"""App-store metadata categorization with Naive Bayes over TF-IDF features."""

from .classifier import (
    NBModel,
    Prediction,
    Variant,
    load_model,
    predict,
    predict_batch,
    save_model,
    train_bernoulli,
    train_multinomial,
)
from .corpus import (
    AppFilter,
    AppRecord,
    CategoryScope,
    Corpus,
    FilterProfile,
    apply_filter_profile,
    compose_document,
    filter_top_developers,
    load_raw_csv,
    read_corpus_file,
    write_corpus_file,
)
from .errors import (
    DegenerateCorpusError,
    DegenerateFeaturesError,
    PlayclassError,
    SchemaError,
    StratificationError,
)
from .evaluation import (
    ClassReport,
    ConfusionMatrix,
    CurvePoint,
    CVResult,
    PipelineConfig,
    SplitKind,
    SplitPlan,
    class_report,
    confusion,
    cross_validate,
    evaluate_holdout,
    learning_curve,
    make_splits,
    rfe_cv,
)
from .features import (
    DocTermMatrix,
    Vocabulary,
    WeightMode,
    build_vocabulary,
    tfidf_weight,
    vectorize,
    vectorize_texts,
)
from .textproc import StopWordList, default_stop_words, load_stop_words, tokenize

__version__ = "0.1.0"
