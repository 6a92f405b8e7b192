//! JSON file format for forms.

use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::Form;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarMode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermFile {
    pub exp: Vec<i64>,
    pub coeff: Value,
}

/// On-disk shape: `{"n", "degree", "mode", "terms": [{"exp", "coeff"}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormFile {
    pub n: usize,
    pub degree: u32,
    pub mode: ScalarMode,
    pub terms: Vec<TermFile>,
}

impl<S: Scalar> Form<S> {
    pub fn to_file(&self) -> FormFile {
        FormFile {
            n: self.n,
            degree: self.degree,
            mode: S::MODE,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermFile {
                    exp: m.exponents().iter().map(|&e| e as i64).collect(),
                    coeff: c.to_json(),
                })
                .collect(),
        }
    }

    /// Reads coefficients as `S` regardless of the declared mode.
    pub fn from_file(file: &FormFile) -> Result<Self> {
        let terms = file
            .terms
            .iter()
            .map(|t| Ok((t.exp.clone(), S::from_json(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        Form::make(file.n, file.degree, terms)
    }
}

/// A form in whichever scalar mode its file declared.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyForm {
    Rational(Form<BigRational>),
    Float(Form<f64>),
}

impl AnyForm {
    pub fn from_file(file: &FormFile) -> Result<Self> {
        Ok(match file.mode {
            ScalarMode::Rational => AnyForm::Rational(Form::from_file(file)?),
            ScalarMode::Float => AnyForm::Float(Form::from_file(file)?),
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: FormFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn to_file(&self) -> FormFile {
        match self {
            AnyForm::Rational(p) => p.to_file(),
            AnyForm::Float(p) => p.to_file(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("form files always serialize")
    }

    pub fn mode(&self) -> ScalarMode {
        match self {
            AnyForm::Rational(_) => ScalarMode::Rational,
            AnyForm::Float(_) => ScalarMode::Float,
        }
    }

    pub fn to_f64(&self) -> Form<f64> {
        match self {
            AnyForm::Rational(p) => p.to_f64(),
            AnyForm::Float(p) => p.clone(),
        }
    }
}

impl From<Form<BigRational>> for AnyForm {
    fn from(p: Form<BigRational>) -> Self {
        AnyForm::Rational(p)
    }
}

impl From<Form<f64>> for AnyForm {
    fn from(p: Form<f64>) -> Self {
        AnyForm::Float(p)
    }
}
