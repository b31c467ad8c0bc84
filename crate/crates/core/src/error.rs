use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures reported by a model provider (logits, embedding or generation).
#[derive(Debug, Error)]
pub enum ProviderError {
    #[error("provider unreachable after {attempts} attempt(s): {message}")]
    Unavailable { attempts: u32, message: String },
    #[error("provider protocol error: {0}")]
    Protocol(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("input text is empty")]
    EmptyInput,
    #[error("unknown document `{0}`")]
    MissingDocument(String),
    #[error("break selection needs at least one candidate")]
    NoCandidates,
    #[error("parent chunk `{0}` does not cover any sentence of its document")]
    InvalidParent(String),
    #[error("no score for retrieval unit `{0}`")]
    IncompleteScores(String),
    #[error("k must be at least 1")]
    InvalidK,
    #[error("zero vector has no direction")]
    DegenerateVector,
    #[error("vector dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("ranking is empty")]
    EmptyRanking,
    #[error("evaluation needs at least one query")]
    EmptyEvaluation,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("document `{0}` has no text")]
    EmptyDocument(String),
    #[error("duplicate document id `{0}`")]
    DuplicateDocId(String),
    #[error("malformed record at line {line}: {message}")]
    MalformedRecord { line: usize, message: String },
    #[error("unsupported schema_version {0}")]
    UnsupportedSchema(u32),
    #[error("vector store was built for index {expected}, loaded index is {actual}")]
    StaleVectorStore { expected: String, actual: String },
    #[error("document `{doc_id}`, window {window}: {source}")]
    Window {
        doc_id: String,
        window: String,
        #[source]
        source: ProviderError,
    },
    #[error(transparent)]
    Provider(#[from] ProviderError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json {
            context: context.into(),
            source,
        }
    }

    /// Process exit code for the command-line front end.
    ///
    /// 2 = configuration, 3 = provider, 4 = data.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_) | Error::InvalidK => 2,
            Error::Provider(_) | Error::Window { .. } => 3,
            _ => 4,
        }
    }
}
