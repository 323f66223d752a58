//! Indexed coefficient streams.
//!
//! A stream is either a finite vector or a closed-form generator, optionally
//! bounded. Every access is range-checked; reading past the end of a finite
//! stream is an error, never a silent extension.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

type Generator<S> = Arc<dyn Fn(usize) -> Result<S> + Send + Sync>;

#[derive(Clone)]
enum Source<S> {
    Vec(Arc<Vec<S>>),
    Fn(Generator<S>),
}

#[derive(Clone)]
pub struct Stream<S> {
    name: Arc<str>,
    start: usize,
    len: Option<usize>,
    source: Source<S>,
}

impl<S: Scalar> Stream<S> {
    /// Finite stream whose first entry has index `start`.
    pub fn from_vec(name: &str, start: usize, values: Vec<S>) -> Self {
        Stream {
            name: name.into(),
            start,
            len: Some(values.len()),
            source: Source::Vec(Arc::new(values)),
        }
    }

    /// Generated stream; `len = None` means unbounded.
    pub fn generated<F>(name: &str, start: usize, len: Option<usize>, f: F) -> Self
    where
        F: Fn(usize) -> Result<S> + Send + Sync + 'static,
    {
        Stream {
            name: name.into(),
            start,
            len,
            source: Source::Fn(Arc::new(f)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn len(&self) -> Option<usize> {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == Some(0)
    }

    /// Last valid index, `None` if unbounded or empty.
    pub fn last_index(&self) -> Option<usize> {
        self.len
            .and_then(|l| l.checked_sub(1))
            .map(|l| l + self.start)
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= self.start && self.len.is_none_or(|l| i - self.start < l)
    }

    fn range_text(&self) -> String {
        match self.len {
            None => format!("{}..", self.start),
            Some(0) => "empty".to_string(),
            Some(l) => format!("{}..={}", self.start, self.start + l - 1),
        }
    }

    pub fn get(&self, i: usize) -> Result<S> {
        if !self.contains(i) {
            return Err(Error::StreamExhausted {
                name: self.name.to_string(),
                index: i,
                range: self.range_text(),
            });
        }
        match &self.source {
            Source::Vec(v) => Ok(v[i - self.start].clone()),
            Source::Fn(f) => f(i),
        }
    }

    /// Entries `start..=last`.
    pub fn take_to(&self, last: usize) -> Result<Vec<S>> {
        (self.start..=last).map(|i| self.get(i)).collect()
    }

    /// First `count` entries.
    pub fn take(&self, count: usize) -> Result<Vec<S>> {
        (self.start..self.start + count).map(|i| self.get(i)).collect()
    }

    /// Number of entries available up to `cap` (the full length when finite).
    pub fn available(&self, cap: usize) -> usize {
        self.len.map_or(cap, |l| l.min(cap))
    }

    /// Materializes the whole stream if finite, otherwise the first `cap`.
    pub fn materialize(&self, cap: usize) -> Result<Vec<S>> {
        self.take(self.available(cap))
    }

    /// Same values with one entry replaced. Used to build negative controls.
    pub fn with_override(&self, index: usize, value: S) -> Self {
        let inner = self.clone();
        Stream::generated(&self.name, self.start, self.len, move |i| {
            if i == index {
                Ok(value.clone())
            } else {
                inner.get(i)
            }
        })
    }
}

impl<S: fmt::Debug> fmt::Debug for Stream<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let count = self.len.map_or(6, |l| l.min(6));
        let preview: Vec<String> = (0..count)
            .map(|k| match &self.source {
                Source::Vec(v) => format!("{:?}", v[k]),
                Source::Fn(g) => g(self.start + k).map_or("?".to_string(), |v| format!("{v:?}")),
            })
            .collect();
        let range = match self.len {
            None => format!("{}..", self.start),
            Some(l) => format!("{}..{}", self.start, self.start + l),
        };
        f.debug_struct("Stream")
            .field("name", &self.name)
            .field("range", &range)
            .field("head", &preview)
            .finish()
    }
}
