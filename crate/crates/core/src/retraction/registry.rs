use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{retract_forward_with, retract_inverse_with, RetractOptions, Variant};
use crate::error::{Error, Result};
use crate::sympstiefel::{SpStPoint, SpStTangent};

pub type ForwardFn = Arc<dyn Fn(&SpStPoint, &SpStTangent) -> Result<SpStPoint> + Send + Sync>;
pub type InverseFn = Arc<dyn Fn(&SpStPoint, &SpStPoint) -> Result<SpStTangent> + Send + Sync>;

/// A named forward retraction with an optional inverse.
#[derive(Clone)]
pub struct RetractionPair {
    name: String,
    forward: ForwardFn,
    inverse: Option<InverseFn>,
}

impl RetractionPair {
    pub fn new(name: impl Into<String>, forward: ForwardFn, inverse: Option<InverseFn>) -> Self {
        Self {
            name: name.into(),
            forward,
            inverse,
        }
    }

    /// The polar-factor pair for one variant.
    pub fn polar_light(variant: Variant, precheck_domain: bool) -> Self {
        let mut opts = RetractOptions::new(variant);
        opts.precheck_domain = precheck_domain;
        let fwd_opts = opts;
        Self::new(
            format!("polar-light/{}", variant.as_str()),
            Arc::new(move |u, d| retract_forward_with(u, d, &fwd_opts).map(|o| o.point)),
            Some(Arc::new(move |u, ut| {
                retract_inverse_with(u, ut, &opts).map(|(d, _)| d)
            })),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn forward(&self, u: &SpStPoint, d: &SpStTangent) -> Result<SpStPoint> {
        (self.forward)(u, d)
    }

    /// `None` when the retraction has no registered inverse.
    pub fn inverse(&self, u: &SpStPoint, utilde: &SpStPoint) -> Option<Result<SpStTangent>> {
        self.inverse.as_ref().map(|inv| inv(u, utilde))
    }

    pub fn has_inverse(&self) -> bool {
        self.inverse.is_some()
    }
}

impl fmt::Debug for RetractionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RetractionPair")
            .field("name", &self.name)
            .field("has_inverse", &self.has_inverse())
            .finish()
    }
}

/// Name → retraction map used by the benchmark harness. Further retractions
/// (forward-only ones included) are added with [`Registry::with`].
#[derive(Debug, Clone, Default)]
pub struct Registry {
    entries: BTreeMap<String, RetractionPair>,
}

impl Registry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `polar-light/cayley` and `polar-light/exp`.
    pub fn builtin(precheck_domain: bool) -> Self {
        Self::empty()
            .with(RetractionPair::polar_light(
                Variant::Cayley,
                precheck_domain,
            ))
            .with(RetractionPair::polar_light(
                Variant::Exponential,
                precheck_domain,
            ))
    }

    pub fn with(mut self, pair: RetractionPair) -> Self {
        self.entries.insert(pair.name.clone(), pair);
        self
    }

    pub fn get(&self, name: &str) -> Result<&RetractionPair> {
        self.entries
            .get(name)
            .ok_or_else(|| Error::UnknownRetraction(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

/// The built-in registry without domain prechecks.
pub fn registry() -> Registry {
    Registry::builtin(false)
}
