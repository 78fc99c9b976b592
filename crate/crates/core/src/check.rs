//! Named verification results carried by certificates and reduction steps.

/// One verified identity: a stable name and whether it held exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedCheck {
    pub name: String,
    pub ok: bool,
}

impl NamedCheck {
    pub fn new(name: impl Into<String>, ok: bool) -> Self {
        NamedCheck {
            name: name.into(),
            ok,
        }
    }
}
