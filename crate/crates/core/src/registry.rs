//! Name-keyed registries of interchangeable strategies.
//!
//! Every family of algorithm variants in this crate (discretization methods,
//! alpha-bound rules, module-condition variants, selection criteria) sits
//! behind a small trait. A [`Registry`] maps the user-facing name of each
//! variant to a boxed implementation so that the CLI and configuration files
//! can pick one at runtime.

use crate::error::{Error, Result};

/// Implemented by every strategy that can be stored in a [`Registry`].
pub trait Named {
    fn name(&self) -> &'static str;
}

pub struct Registry<T: ?Sized + Named> {
    kind: &'static str,
    entries: Vec<Box<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: Vec::new(),
        }
    }

    /// Registers a strategy, replacing any earlier entry with the same name.
    pub fn register(&mut self, entry: Box<T>) -> &mut Self {
        self.entries.retain(|e| e.name() != entry.name());
        self.entries.push(entry);
        self
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|e| e.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter: Named {
        fn greet(&self) -> String;
    }

    struct Hello;
    impl Named for Hello {
        fn name(&self) -> &'static str {
            "hello"
        }
    }
    impl Greeter for Hello {
        fn greet(&self) -> String {
            "hello".into()
        }
    }

    struct Loud;
    impl Named for Loud {
        fn name(&self) -> &'static str {
            "hello"
        }
    }
    impl Greeter for Loud {
        fn greet(&self) -> String {
            "HELLO".into()
        }
    }

    #[test]
    fn lookup_and_replace() {
        let mut reg: Registry<dyn Greeter> = Registry::new("greeter");
        reg.register(Box::new(Hello));
        assert_eq!(reg.get("hello").unwrap().greet(), "hello");
        reg.register(Box::new(Loud));
        assert_eq!(reg.names(), vec!["hello"]);
        assert_eq!(reg.get("hello").unwrap().greet(), "HELLO");
    }

    #[test]
    fn unknown_name_lists_available() {
        let mut reg: Registry<dyn Greeter> = Registry::new("greeter");
        reg.register(Box::new(Hello));
        match reg.get("nope") {
            Err(Error::UnknownStrategy { available, .. }) => assert_eq!(available, "hello"),
            _ => panic!("expected UnknownStrategy"),
        }
    }
}
