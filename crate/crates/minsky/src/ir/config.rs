//! Configurations: finite maps from counters to naturals.

use super::CounterId;
use crate::fastmath::Nat;
use num_traits::Zero;
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

/// A configuration maps every counter to a natural number; only finitely many
/// are non-zero and only those are stored, so equality and ordering are
/// canonical.
///
/// Serializes as a JSON object of decimal strings, e.g. `{"x":"3"}`, with
/// zero entries omitted and keys sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Configuration(BTreeMap<CounterId, Nat>);

impl Configuration {
    /// The all-zero configuration.
    pub fn zero() -> Self {
        Configuration::default()
    }

    pub fn get(&self, c: &CounterId) -> Nat {
        self.0.get(c).cloned().unwrap_or_else(Nat::zero)
    }

    /// Sets a counter, dropping the entry when the value is zero.
    pub fn set(&mut self, c: CounterId, value: Nat) {
        if value.is_zero() {
            self.0.remove(&c);
        } else {
            self.0.insert(c, value);
        }
    }

    pub fn with(mut self, c: &CounterId, value: impl Into<Nat>) -> Self {
        self.set(c.clone(), value.into());
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Iterates over the non-zero entries in name order.
    pub fn iter(&self) -> impl Iterator<Item = (&CounterId, &Nat)> {
        self.0.iter()
    }

    pub fn counters(&self) -> impl Iterator<Item = &CounterId> {
        self.0.keys()
    }

    /// Sum of all counter values.
    pub fn total(&self) -> Nat {
        self.0.values().sum()
    }

    /// True when every non-zero counter belongs to `allowed`.
    pub fn supported_by<'a, I: IntoIterator<Item = &'a CounterId>>(&self, allowed: I) -> bool {
        let allowed: std::collections::BTreeSet<_> = allowed.into_iter().collect();
        self.0.keys().all(|c| allowed.contains(c))
    }

    pub fn from_entries<I: IntoIterator<Item = (CounterId, Nat)>>(entries: I) -> Self {
        let mut cfg = Configuration::zero();
        for (c, v) in entries {
            cfg.set(c, v);
        }
        cfg
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("configuration serialization")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (c, v) in &self.0 {
            map.serialize_entry(c.as_str(), &v.to_str_radix(10))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ConfigVisitor;

        impl<'de> Visitor<'de> for ConfigVisitor {
            type Value = Configuration;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object mapping counter names to decimal strings")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut cfg = Configuration::zero();
                while let Some((name, value)) = access.next_entry::<String, String>()? {
                    let counter = CounterId::try_new(&name)
                        .ok_or_else(|| de::Error::custom(format!("bad counter name {name:?}")))?;
                    if value.is_empty() || !value.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(de::Error::custom(format!(
                            "counter {name:?} has non-decimal value {value:?}"
                        )));
                    }
                    let nat = Nat::parse_bytes(value.as_bytes(), 10)
                        .ok_or_else(|| de::Error::custom("unparsable value"))?;
                    cfg.set(counter, nat);
                }
                Ok(cfg)
            }
        }

        deserializer.deserialize_map(ConfigVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(name: &str) -> CounterId {
        CounterId::new(name)
    }

    #[test]
    fn zero_entries_are_not_stored() {
        let mut cfg = Configuration::zero().with(&c("x"), 2u32);
        cfg.set(c("x"), Nat::zero());
        assert!(cfg.is_zero());
        assert_eq!(cfg, Configuration::zero());
    }

    #[test]
    fn json_round_trip_omits_zeros() {
        let cfg = Configuration::zero().with(&c("y"), 4u32).with(&c("x"), 1u32);
        assert_eq!(cfg.to_json(), r#"{"x":"1","y":"4"}"#);
        assert_eq!(Configuration::from_json(&cfg.to_json()).unwrap(), cfg);
        assert_eq!(
            Configuration::from_json(r#"{"x":"0"}"#).unwrap(),
            Configuration::zero()
        );
    }

    #[test]
    fn json_rejects_garbage() {
        assert!(Configuration::from_json(r#"{"x":"-1"}"#).is_err());
        assert!(Configuration::from_json(r#"{"x":1}"#).is_err());
        assert!(Configuration::from_json(r#"{"9x":"1"}"#).is_err());
    }
}
