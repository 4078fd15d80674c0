"""Automated text-entry evaluation for two-phase (component-to-character) input methods."""

from .encoding import (
    BigramModel,
    Chunk,
    Lexicon,
    chunk_text,
    encoding_counts,
    encoding_kspc,
    load_bigram,
    load_corpus,
    load_lexicon,
    segment,
    to_phonetic_keystrokes,
    to_radical_keystrokes,
)
from .harness import SweepConfig, SweepReport, compare_chunk, emit_report, run_condition, run_sweep
from .ime import (
    ConversionResult,
    bigram_viterbi_convert,
    make_converter,
    parse_syllables,
    radical_convert,
    unigram_convert,
)
from .metrics import (
    CpcInputs,
    InputStream,
    Keystroke,
    Kind,
    MsdResult,
    TaxonomyCounts,
    classify_keystrokes,
    cpc,
    cpc_from_stream,
    kspc_from_stream,
    kspc_taxonomy,
    levenshtein_distance,
    msd_error_rate_new,
    msd_error_rate_old,
    msd_error_rate_taxonomy,
    optimal_alignments,
    total_error_rate,
)
from .timing import (
    CostBreakdown,
    TimingParams,
    aac,
    amortized_bounds,
    amortized_cost,
    correction_penalty,
    fitts_time,
    hick_time,
    modification_cost,
)

__version__ = "0.1.0"
