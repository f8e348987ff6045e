//! Finite classifications: tokens, types and the incidence relation between them.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ClassifierError;

/// A finite classification `⟨Tok, Typ, ⊨⟩`.
///
/// Token and type identifiers are opaque strings compared by exact equality.
/// The incidence matrix is indexed `[token][type]`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ClassificationRepr", into = "ClassificationRepr")]
pub struct Classification {
    id: String,
    tokens: Vec<String>,
    types: Vec<String>,
    incidence: Vec<Vec<bool>>,
    token_index: HashMap<String, usize>,
    type_index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct ClassificationRepr {
    id: String,
    tokens: Vec<String>,
    types: Vec<String>,
    incidence: Vec<Vec<bool>>,
}

impl TryFrom<ClassificationRepr> for Classification {
    type Error = ClassifierError;

    fn try_from(r: ClassificationRepr) -> Result<Self, Self::Error> {
        Classification::new(r.id, r.tokens, r.types, r.incidence)
    }
}

impl From<Classification> for ClassificationRepr {
    fn from(c: Classification) -> Self {
        ClassificationRepr {
            id: c.id,
            tokens: c.tokens,
            types: c.types,
            incidence: c.incidence,
        }
    }
}

fn index_of(
    id: &str,
    names: &[String],
    dup: impl Fn(String, String) -> ClassifierError,
) -> Result<HashMap<String, usize>, ClassifierError> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if index.insert(n.clone(), i).is_some() {
            return Err(dup(id.to_string(), n.clone()));
        }
    }
    Ok(index)
}

impl Classification {
    pub fn new(
        id: impl Into<String>,
        tokens: Vec<String>,
        types: Vec<String>,
        incidence: Vec<Vec<bool>>,
    ) -> Result<Self, ClassifierError> {
        let id = id.into();
        let token_index = index_of(&id, &tokens, |id, name| ClassifierError::DuplicateToken {
            classification: id,
            name,
        })?;
        let type_index = index_of(&id, &types, |id, name| ClassifierError::DuplicateType {
            classification: id,
            name,
        })?;
        if incidence.len() != tokens.len() || incidence.iter().any(|row| row.len() != types.len())
        {
            return Err(ClassifierError::IncidenceShape {
                classification: id,
                rows: tokens.len(),
                cols: types.len(),
            });
        }
        Ok(Classification {
            id,
            tokens,
            types,
            incidence,
            token_index,
            type_index,
        })
    }

    /// Builds a classification from string slices and a relation given as
    /// `(token, type)` pairs that hold.
    pub fn from_relation(
        id: &str,
        tokens: &[&str],
        types: &[&str],
        holds: &[(&str, &str)],
    ) -> Result<Self, ClassifierError> {
        let tokens: Vec<String> = tokens.iter().map(|s| s.to_string()).collect();
        let types: Vec<String> = types.iter().map(|s| s.to_string()).collect();
        let mut incidence = vec![vec![false; types.len()]; tokens.len()];
        for (tok, ty) in holds {
            let a = tokens.iter().position(|t| t == tok).ok_or_else(|| {
                ClassifierError::UnknownToken {
                    classification: id.to_string(),
                    name: tok.to_string(),
                }
            })?;
            let b = types.iter().position(|t| t == ty).ok_or_else(|| {
                ClassifierError::UnknownType {
                    classification: id.to_string(),
                    name: ty.to_string(),
                }
            })?;
            incidence[a][b] = true;
        }
        Classification::new(id, tokens, types, incidence)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn types(&self) -> &[String] {
        &self.types
    }

    pub fn incidence(&self) -> &[Vec<bool>] {
        &self.incidence
    }

    pub fn token_count(&self) -> usize {
        self.tokens.len()
    }

    pub fn type_count(&self) -> usize {
        self.types.len()
    }

    pub fn token_position(&self, name: &str) -> Option<usize> {
        self.token_index.get(name).copied()
    }

    pub fn type_position(&self, name: &str) -> Option<usize> {
        self.type_index.get(name).copied()
    }

    /// `token ⊨ ty` by position.
    #[inline]
    pub fn holds(&self, token: usize, ty: usize) -> bool {
        self.incidence[token][ty]
    }

    /// `token ⊨ ty` by name; `None` if either name is unknown.
    pub fn satisfies(&self, token: &str, ty: &str) -> Option<bool> {
        Some(self.holds(self.token_position(token)?, self.type_position(ty)?))
    }

    /// Same relation under a different identifier.
    pub fn renamed(&self, id: impl Into<String>) -> Classification {
        let mut c = self.clone();
        c.id = id.into();
        c
    }
}

impl fmt::Debug for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Classification")
            .field("id", &self.id)
            .field("tokens", &self.tokens)
            .field("types", &self.types)
            .field("incidence", &self.incidence)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_tokens() {
        let err = Classification::new(
            "A",
            vec!["a".into(), "a".into()],
            vec!["x".into()],
            vec![vec![true], vec![false]],
        )
        .unwrap_err();
        assert!(matches!(err, ClassifierError::DuplicateToken { .. }));
    }

    #[test]
    fn rejects_ragged_incidence() {
        let err = Classification::new(
            "A",
            vec!["a".into()],
            vec!["x".into(), "y".into()],
            vec![vec![true]],
        )
        .unwrap_err();
        assert!(matches!(err, ClassifierError::IncidenceShape { .. }));
    }

    #[test]
    fn json_round_trip() {
        let c = Classification::from_relation("A", &["a", "b"], &["x", "y"], &[("a", "x")]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(
            s,
            r#"{"id":"A","tokens":["a","b"],"types":["x","y"],"incidence":[[true,false],[false,false]]}"#
        );
        let back: Classification = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.satisfies("a", "x"), Some(true));
        assert_eq!(back.satisfies("b", "q"), None);
    }
}
