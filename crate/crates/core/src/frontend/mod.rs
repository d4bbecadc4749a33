//! Circuit ingestion: the OpenQASM 2 subset and the built-in benchmark corpus.

pub mod corpus;
pub mod qasm;

pub use corpus::{generate, load_corpus, write_corpus, CorpusError, CorpusSpec, Family};
pub use qasm::{emit_qasm, parse_qasm, parse_qasm_with_id, QasmError};
