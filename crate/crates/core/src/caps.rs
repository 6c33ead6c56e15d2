use crate::error::{Error, Result};

/// Size limits applied throughout. Exceeding any of them yields
/// [`Error::OverCap`] instead of a truncated result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest group produced by closing permutation generators.
    pub group_order: usize,
    /// Largest group whose full subgroup lattice may be enumerated.
    pub subgroup_order: usize,
    /// Largest number of simplices in a single complex.
    pub simplices: usize,
    /// Coset table capacity for Todd-Coxeter enumeration.
    pub max_cosets: usize,
    /// Largest index accepted by the low-index search.
    pub max_index: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            group_order: 5040,
            subgroup_order: 200,
            simplices: 2_000_000,
            max_cosets: 200_000,
            max_index: 30,
        }
    }
}

impl Caps {
    /// Applies overrides of the form `simplices=N,order=N,cosets=N`.
    ///
    /// `order` sets the subgroup-enumeration cap; `group` and `index` are
    /// accepted as well for the closure and low-index caps.
    pub fn with_overrides(mut self, text: &str) -> Result<Self> {
        let mut offset = 0;
        for item in text.split(',') {
            let trimmed = item.trim();
            if !trimmed.is_empty() {
                let (key, value) = trimmed.split_once('=').ok_or_else(|| {
                    Error::parse(offset, format!("expected key=value, got `{trimmed}`"))
                })?;
                let value: usize = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(offset, format!("bad number in `{trimmed}`")))?;
                match key.trim() {
                    "simplices" => self.simplices = value,
                    "order" => self.subgroup_order = value,
                    "cosets" => self.max_cosets = value,
                    "group" => self.group_order = value,
                    "index" => self.max_index = value,
                    other => return Err(Error::parse(offset, format!("unknown cap `{other}`"))),
                }
            }
            offset += item.len() + 1;
        }
        Ok(self)
    }

    /// Defaults, overridden by the `COSET_CAPS` environment variable when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var("COSET_CAPS") {
            Ok(text) => Caps::default().with_overrides(&text),
            Err(_) => Ok(Caps::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        let caps = Caps::default()
            .with_overrides("simplices=10, order=24,cosets=7")
            .unwrap();
        assert_eq!(caps.simplices, 10);
        assert_eq!(caps.subgroup_order, 24);
        assert_eq!(caps.max_cosets, 7);
        assert_eq!(caps.group_order, 5040);
    }

    #[test]
    fn overrides_reject_garbage() {
        assert!(matches!(
            Caps::default().with_overrides("simplices=ten"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            Caps::default().with_overrides("order=3,depth=2"),
            Err(Error::Parse { pos: 8, .. })
        ));
        assert_eq!(Caps::default().with_overrides("").unwrap(), Caps::default());
    }
}
