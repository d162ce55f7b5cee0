//! Numeric builtins from the `math:` namespace.

use std::sync::Arc;

use bigdecimal::BigDecimal;

use super::InferError;
use crate::term::{Decimal, Term};
use crate::vocab::MATH;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Builtin {
    NotGreaterThan,
    GreaterThan,
    LessThan,
    NotLessThan,
    Sum,
    Difference,
    Product,
    Quotient,
}

/// Either a guard verdict or a value produced for an unbound object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuiltinOutcome {
    Holds(bool),
    Bind(Arc<str>, Term),
}

impl Builtin {
    pub const ALL: [Builtin; 8] = [
        Builtin::NotGreaterThan,
        Builtin::GreaterThan,
        Builtin::LessThan,
        Builtin::NotLessThan,
        Builtin::Sum,
        Builtin::Difference,
        Builtin::Product,
        Builtin::Quotient,
    ];

    pub fn local_name(self) -> &'static str {
        match self {
            Builtin::NotGreaterThan => "notGreaterThan",
            Builtin::GreaterThan => "greaterThan",
            Builtin::LessThan => "lessThan",
            Builtin::NotLessThan => "notLessThan",
            Builtin::Sum => "sum",
            Builtin::Difference => "difference",
            Builtin::Product => "product",
            Builtin::Quotient => "quotient",
        }
    }

    pub fn iri(self) -> String {
        format!("{MATH}{}", self.local_name())
    }

    pub fn from_term(term: &Term) -> Option<Builtin> {
        let local = term.as_iri()?.strip_prefix(MATH)?;
        Builtin::ALL.into_iter().find(|b| b.local_name() == local)
    }

    pub fn is_comparison(self) -> bool {
        matches!(self, Builtin::NotGreaterThan | Builtin::GreaterThan | Builtin::LessThan | Builtin::NotLessThan)
    }

    /// Whether the arguments are instantiated enough to evaluate.
    pub fn ready(self, subject: &Term, object: &Term) -> bool {
        if self.is_comparison() {
            subject.is_ground() && object.is_ground()
        } else {
            subject.is_ground() && (object.is_ground() || object.is_variable())
        }
    }
}

fn number(builtin: Builtin, term: &Term) -> Result<&BigDecimal, InferError> {
    term.as_number()
        .map(Decimal::as_big)
        .ok_or_else(|| InferError::NonNumeric { builtin: builtin.iri(), value: term.to_string() })
}

/// Evaluates `subject predicate object` for a builtin predicate.
pub fn eval_builtin(predicate: &Term, subject: &Term, object: &Term) -> Result<BuiltinOutcome, InferError> {
    let builtin = Builtin::from_term(predicate).ok_or_else(|| InferError::NotABuiltin(predicate.to_string()))?;
    if !subject.is_ground() {
        return Err(InferError::UnboundSubject { builtin: builtin.iri() });
    }
    if builtin.is_comparison() {
        if !object.is_ground() {
            return Err(InferError::NonEvaluableBuiltin(format!("{subject} {predicate} {object}")));
        }
        let (a, b) = (number(builtin, subject)?, number(builtin, object)?);
        let holds = match builtin {
            Builtin::NotGreaterThan => a <= b,
            Builtin::GreaterThan => a > b,
            Builtin::LessThan => a < b,
            Builtin::NotLessThan => a >= b,
            _ => unreachable!(),
        };
        return Ok(BuiltinOutcome::Holds(holds));
    }
    let Term::List(args) = subject else {
        return Err(InferError::BadArguments {
            builtin: builtin.iri(),
            detail: "subject must be a two-element list".into(),
        });
    };
    if args.len() != 2 {
        return Err(InferError::BadArguments {
            builtin: builtin.iri(),
            detail: format!("expected 2 list elements, got {}", args.len()),
        });
    }
    let (a, b) = (number(builtin, &args[0])?, number(builtin, &args[1])?);
    let value = match builtin {
        Builtin::Sum => a + b,
        Builtin::Difference => a - b,
        Builtin::Product => a * b,
        Builtin::Quotient => {
            if *b == 0 {
                return Err(InferError::DivisionByZero);
            }
            a / b
        }
        _ => unreachable!(),
    };
    let value = Term::number(Decimal::new(value));
    match object {
        Term::Variable(name) => Ok(BuiltinOutcome::Bind(name.clone(), value)),
        ground => Ok(BuiltinOutcome::Holds(*ground == value)),
    }
}
