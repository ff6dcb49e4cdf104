use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

/// Query counts, in total and per phase path (`"gomory_hu/ni"`).
#[derive(Debug, Default)]
pub struct QueryLedger {
    total: AtomicU64,
    phases: Mutex<BTreeMap<String, u64>>,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn charge(&self, phase: &str, count: u64) {
        self.total.fetch_add(count, Ordering::Relaxed);
        *self.phases.lock().expect("ledger lock").entry(phase.to_owned()).or_insert(0) += count;
    }

    pub fn total(&self) -> u64 {
        self.total.load(Ordering::Relaxed)
    }

    pub fn per_phase(&self) -> BTreeMap<String, u64> {
        self.phases.lock().expect("ledger lock").clone()
    }

    /// Sum over every phase equal to `prefix` or nested below it.
    pub fn under(&self, prefix: &str) -> u64 {
        self.phases
            .lock()
            .expect("ledger lock")
            .iter()
            .filter(|(k, _)| {
                prefix.is_empty() || *k == prefix || (k.starts_with(prefix) && k.as_bytes().get(prefix.len()) == Some(&b'/'))
            })
            .map(|(_, &v)| v)
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.per_phase()).expect("string keys serialize")
    }
}
