//! Domain types shared by the store, the index and the HTTP layer.

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

/// One of the four fixed archive roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Category {
    Artikel,
    DokumenSuratKeluar,
    DokumenSuratMasuk,
    Gambar,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::Artikel,
        Category::DokumenSuratKeluar,
        Category::DokumenSuratMasuk,
        Category::Gambar,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Category::Artikel => "Artikel",
            Category::DokumenSuratKeluar => "Dokumen Surat Keluar",
            Category::DokumenSuratMasuk => "Dokumen Surat Masuk",
            Category::Gambar => "Gambar",
        }
    }

    /// MIME types an upload into this root may carry.
    pub fn accepted_content_types(self) -> &'static [&'static str] {
        match self {
            Category::Gambar => &["application/pdf", "image/png", "image/jpeg"],
            _ => &["application/pdf"],
        }
    }

    pub fn accepts(self, content_type: &str) -> bool {
        let essence = content_type.split(';').next().unwrap_or("").trim();
        self.accepted_content_types()
            .iter()
            .any(|t| t.eq_ignore_ascii_case(essence))
    }

    pub fn labels() -> String {
        Category::ALL.map(Category::label).join(", ")
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown category {0:?}; expected one of: Artikel, Dokumen Surat Keluar, Dokumen Surat Masuk, Gambar")]
pub struct InvalidCategory(pub String);

impl FromStr for Category {
    type Err = InvalidCategory;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or_else(|| InvalidCategory(s.to_string()))
    }
}

impl TryFrom<String> for Category {
    type Error = InvalidCategory;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Category> for String {
    fn from(c: Category) -> String {
        c.label().to_string()
    }
}

macro_rules! id_newtype {
    ($name:ident) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub u64);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl FromStr for $name {
            type Err = std::num::ParseIntError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                s.parse().map($name)
            }
        }
    };
}

id_newtype!(DocId);
id_newtype!(UserId);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Admin,
    Staff,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Admin => "Admin",
            Role::Staff => "Staff",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown role {0:?}; expected Admin or Staff")]
pub struct InvalidRole(pub String);

impl FromStr for Role {
    type Err = InvalidRole;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "admin" => Ok(Role::Admin),
            "staff" => Ok(Role::Staff),
            _ => Err(InvalidRole(s.to_string())),
        }
    }
}

/// An authenticated actor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Principal {
    pub user_id: UserId,
    pub username: String,
    pub role: Role,
}

impl Principal {
    pub fn is_admin(&self) -> bool {
        self.role == Role::Admin
    }
}

/// The editable metadata of an archived letter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentMeta {
    pub perihal: String,
    pub no_surat: String,
    #[serde(default)]
    pub deskripsi: String,
    pub kategori: Category,
}

/// An uploaded file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Upload {
    pub file_name: String,
    pub content_type: String,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentRecord {
    pub id: DocId,
    pub perihal: String,
    pub no_surat: String,
    pub deskripsi: String,
    pub kategori: Category,
    pub file_name: String,
    pub file_ref: String,
    pub content_type: String,
    pub uploaded_by: UserId,
    pub uploaded_at: DateTime<Utc>,
    pub deleted: bool,
}

impl DocumentRecord {
    pub fn meta(&self) -> DocumentMeta {
        DocumentMeta {
            perihal: self.perihal.clone(),
            no_surat: self.no_surat.clone(),
            deskripsi: self.deskripsi.clone(),
            kategori: self.kategori,
        }
    }
}
