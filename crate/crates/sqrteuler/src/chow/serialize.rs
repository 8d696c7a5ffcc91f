//! Canonical JSON forms for golden-file tests: generators with degrees,
//! relations, and sorted term lists. Output is deterministic for a fixed
//! presentation.

use serde_json::{json, Value};

use super::variety::{Class, Variety};

impl Variety {
    /// The presentation as a canonical JSON value.
    pub fn to_json(&self) -> Value {
        let generators: Vec<Value> = self
            .vars()
            .entries()
            .map(|(n, d)| json!({ "name": n, "degree": d }))
            .collect();
        let mut relations: Vec<Value> = self
            .0
            .rules
            .iter()
            .map(|r| {
                json!({
                    "lead": r.lead.render(self.vars()),
                    "rhs": r.rhs.render(),
                })
            })
            .collect();
        if let Some(bn) = &self.0.blow {
            let d_name = self.vars().name(bn.d);
            relations.push(json!({
                "lead": format!("{}^{}", d_name, bn.codim),
                "rhs": bn.dc_rhs.render(),
            }));
        }
        json!({
            "name": self.name(),
            "dimension": self.dim(),
            "generators": generators,
            "relations": relations,
            "point": self.point_monomial().render(self.vars()),
        })
    }
}

impl Class {
    /// Sorted `[monomial, coefficient]` term list with the variety name.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .poly()
            .terms()
            .map(|(m, c)| json!([m.render(self.variety().vars()), c.to_string()]))
            .collect();
        json!({
            "variety": self.variety().name(),
            "terms": terms,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::Variety;

    #[test]
    fn proj_space_presentation_is_stable() {
        // serde_json sorts object keys, which is what makes this canonical
        let p2 = Variety::proj_space(2).unwrap();
        let v = p2.to_json();
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"dimension":2,"generators":[{"degree":1,"name":"H"}],"name":"P2","point":"H^2","relations":[{"lead":"H^3","rhs":"0"}]}"#
        );
    }
}
