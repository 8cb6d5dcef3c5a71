use ahp_core::catalog::CatalogError;
use ahp_core::{AnalysisError, ParseError, SourceSpan, ValidationReport};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;

/// Error body returned by every route: `{status, code, detail, span?, report?}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    pub status: u16,
    pub code: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span: Option<SourceSpan>,
    /// Full validation report when a model was rejected.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<ValidationReport>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, detail: impl Into<String>) -> Self {
        ApiError {
            status: status.as_u16(),
            code: code.to_string(),
            detail: detail.into(),
            span: None,
            report: None,
        }
    }

    pub fn bad_request(detail: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "BAD_REQUEST", detail)
    }

    pub fn unknown_session(id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "UNKNOWN_SESSION", format!("no session `{id}`"))
    }

    pub fn revision_conflict(expected: u64, current: u64) -> Self {
        ApiError::new(
            StatusCode::CONFLICT,
            "REVISION_CONFLICT",
            format!("expected revision {expected}, session is at {current}"),
        )
    }

    pub fn no_model() -> Self {
        ApiError::new(StatusCode::CONFLICT, "NO_MODEL", "session holds no model yet")
    }

    pub fn invalid(report: ValidationReport) -> Self {
        let first = &report.errors[0];
        let mut err = ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            first.code.as_str(),
            format!("{} validation error(s); first: {first}", report.errors.len()),
        );
        err.report = Some(report);
        err
    }
}

impl From<ParseError> for ApiError {
    fn from(e: ParseError) -> Self {
        let mut err = ApiError::new(StatusCode::BAD_REQUEST, e.kind.as_str(), e.message.clone());
        err.span = Some(e.span);
        err
    }
}

impl From<AnalysisError> for ApiError {
    fn from(e: AnalysisError) -> Self {
        let status = match &e {
            AnalysisError::Invalid(report) => return ApiError::invalid(report.clone()),
            AnalysisError::Priority { .. } => StatusCode::UNPROCESSABLE_ENTITY,
            AnalysisError::UnknownPath(_) | AnalysisError::UnknownPair { .. } => StatusCode::NOT_FOUND,
            AnalysisError::BadValue(_) => StatusCode::BAD_REQUEST,
        };
        ApiError::new(status, e.code(), e.to_string())
    }
}

impl From<CatalogError> for ApiError {
    fn from(e: CatalogError) -> Self {
        let status = match e {
            CatalogError::BadFilter(_) | CatalogError::Csv { .. } => StatusCode::BAD_REQUEST,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError::new(status, e.code(), e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}
