//! Wire-format helpers. Integers travel as decimal strings; on input plain
//! JSON numbers are accepted too.

use std::fmt::Display;
use std::str::FromStr;

use serde::de::{self, Deserializer, Visitor};
use serde::Serializer;

pub const SCHEMA_VERSION: &str = "1";

struct IntVisitor<T>(std::marker::PhantomData<T>);

impl<T> Visitor<'_> for IntVisitor<T>
where
    T: FromStr + TryFrom<u64>,
    T::Err: Display,
{
    type Value = T;

    fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str("a non-negative integer or its decimal string")
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<T, E> {
        T::try_from(v).map_err(|_| E::custom(format!("{v} out of range")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<T, E> {
        u64::try_from(v)
            .map_err(|_| E::custom("negative integer"))
            .and_then(|v| self.visit_u64(v))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<T, E> {
        v.trim().parse().map_err(E::custom)
    }
}

/// `#[serde(with = "crate::json::int")]` for `usize` and `u64` fields.
pub mod int {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        D: Deserializer<'de>,
        T: FromStr + TryFrom<u64>,
        T::Err: Display,
    {
        d.deserialize_any(IntVisitor(std::marker::PhantomData))
    }
}

/// Optional integers, `null` when absent.
pub mod opt_int {
    use super::*;
    use serde::Deserialize;

    #[derive(Deserialize)]
    struct Wrap<T: FromStr + TryFrom<u64>>(#[serde(with = "super::int")] T)
    where
        T::Err: Display;

    pub fn serialize<T: Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Option<T>, D::Error>
    where
        D: Deserializer<'de>,
        T: FromStr + TryFrom<u64>,
        T::Err: Display,
    {
        Ok(Option::<Wrap<T>>::deserialize(d)?.map(|w| w.0))
    }
}

/// Lists of integers.
pub mod int_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::Deserialize;

    #[derive(Deserialize)]
    struct Wrap(#[serde(with = "super::int")] usize);

    pub fn serialize<S: Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<usize>, D::Error> {
        Ok(Vec::<Wrap>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }
}

/// Signed integers.
pub mod signed {
    use super::*;

    struct SignedVisitor;

    impl Visitor<'_> for SignedVisitor {
        type Value = i64;

        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("an integer or its decimal string")
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<i64, E> {
            Ok(v)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<i64, E> {
            i64::try_from(v).map_err(|_| E::custom(format!("{v} out of range")))
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<i64, E> {
            v.trim().parse().map_err(E::custom)
        }
    }

    pub fn serialize<S: Serializer>(v: &i64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<i64, D::Error> {
        d.deserialize_any(SignedVisitor)
    }
}

#[cfg(test)]
mod tests {
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize, Debug, PartialEq)]
    struct T {
        #[serde(with = "super::int")]
        n: u64,
        #[serde(with = "super::opt_int", default)]
        k: Option<usize>,
        #[serde(with = "super::int_vec")]
        v: Vec<usize>,
    }

    #[test]
    fn integers_as_strings() {
        let t = T {
            n: 7,
            k: Some(3),
            v: vec![1, 2],
        };
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"n":"7","k":"3","v":["1","2"]}"#);
        assert_eq!(serde_json::from_str::<T>(&s).unwrap(), t);
        let loose: T = serde_json::from_str(r#"{"n":7,"v":[1,"2"]}"#).unwrap();
        assert_eq!(
            loose,
            T {
                n: 7,
                k: None,
                v: vec![1, 2]
            }
        );
        assert!(serde_json::from_str::<T>(r#"{"n":-1,"v":[]}"#).is_err());
    }
}
