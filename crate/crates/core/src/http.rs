//! Blocking JSON-over-HTTP client shared by the provider implementations.

use std::time::Duration;

use reqwest::blocking::Client;
use reqwest::StatusCode;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::ProviderError;

#[derive(Debug, Clone)]
pub(crate) struct JsonClient {
    client: Client,
    base: String,
    max_retries: u32,
    headers: Vec<(&'static str, String)>,
}

impl JsonClient {
    pub(crate) fn new(endpoint: &str, timeout: Duration, max_retries: u32) -> Result<Self, ProviderError> {
        if timeout.is_zero() {
            return Err(ProviderError::Protocol("timeout must be positive".into()));
        }
        let client = Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| ProviderError::Protocol(format!("building HTTP client: {e}")))?;
        Ok(Self {
            client,
            base: endpoint.trim_end_matches('/').to_string(),
            max_retries,
            headers: Vec::new(),
        })
    }

    pub(crate) fn with_header(mut self, name: &'static str, value: String) -> Self {
        self.headers.push((name, value));
        self
    }

    /// POSTs `body` to `path`, retrying transport failures up to `max_retries` times.
    pub(crate) fn post<Req, Resp>(&self, path: &str, body: &Req) -> Result<Resp, ProviderError>
    where
        Req: Serialize + ?Sized,
        Resp: DeserializeOwned,
    {
        let url = format!("{}{}", self.base, path);
        let attempts = self.max_retries + 1;
        let mut last_error = String::new();
        for attempt in 0..attempts {
            if attempt > 0 {
                std::thread::sleep(Duration::from_millis(50 << attempt.min(5)));
            }
            let mut request = self.client.post(&url).json(body);
            for (name, value) in &self.headers {
                request = request.header(*name, value);
            }
            let response = match request.send() {
                Ok(response) => response,
                Err(e) => {
                    last_error = e.to_string();
                    continue;
                }
            };
            let status = response.status();
            if status != StatusCode::OK {
                return Err(ProviderError::Protocol(format!("{url} answered {status}")));
            }
            return response
                .json::<Resp>()
                .map_err(|e| ProviderError::Protocol(format!("{url}: undecodable body: {e}")));
        }
        Err(ProviderError::Unavailable {
            attempts,
            message: format!("{url}: {last_error}"),
        })
    }
}
