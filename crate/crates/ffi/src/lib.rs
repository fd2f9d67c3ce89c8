//! C ABI for gensys. Documents and systems live behind opaque handles,
//! every fallible call returns a `GsStatus`, and the message of the most
//! recent failure on the calling thread is available from
//! `gs_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gensys::io::{load, Model};
use gensys::{
    canonical_form, find_isomorphism, is_complete_set, relate, Error, IsoMode, Quantity, SignScope,
    System,
};

/// A parsed and validated system document.
pub struct GsDocument {
    model: Model,
    names: Vec<CString>,
}

/// A system taken from a document.
pub struct GsSystem {
    system: System,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    NotFound = 5,
    ShapeMismatch = 6,
    NestedSystem = 7,
    Other = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GsRelation {
    pub left_constant: bool,
    pub right_constant: bool,
    pub independent: bool,
    pub left_determines_right: bool,
    pub right_determines_left: bool,
    pub equivalent: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: GsStatus,
    message: String,
}

fn status_of(e: &Error) -> GsStatus {
    match e {
        Error::Parse { .. } => GsStatus::Parse,
        Error::Validation { .. }
        | Error::Malformed(_)
        | Error::DuplicateName(_)
        | Error::DuplicateId(_)
        | Error::EmptyUniverse => GsStatus::Validation,
        Error::NotFound(_) => GsStatus::NotFound,
        Error::ShapeMismatch(_) | Error::ArityMismatch { .. } | Error::UniverseMismatch => {
            GsStatus::ShapeMismatch
        }
        Error::NestedSystem => GsStatus::NestedSystem,
        _ => GsStatus::Other,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            status: status_of(&e),
            message: e.to_string(),
        }
    }
}

fn failure(status: GsStatus, message: String) -> Failure {
    Failure { status, message }
}

fn record(message: String) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

/// Runs `f`, converting failures and panics to a status and recording the
/// message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> GsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GsStatus::Ok,
        Ok(Err(f)) => {
            record(f.message);
            f.status
        }
        Err(_) => {
            record("internal panic".into());
            GsStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    failure(GsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| failure(GsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn mode(relabel_signs: bool) -> IsoMode {
    if relabel_signs {
        IsoMode::SignRelabelling
    } else {
        IsoMode::ValuePreserving
    }
}

fn scope(strict_signs: bool) -> SignScope {
    if strict_signs {
        SignScope::Declared
    } else {
        SignScope::Realized
    }
}

/// Static version string.
#[no_mangle]
pub extern "C" fn gs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Parses a JSON system document of `len` bytes.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_document_parse(
    data: *const u8,
    len: usize,
    out_doc: *mut *mut GsDocument,
) -> GsStatus {
    guard(|| {
        let slot = out(out_doc, "out_doc")?;
        *slot = ptr::null_mut();
        if data.is_null() {
            return Err(null("data"));
        }
        let bytes = std::slice::from_raw_parts(data, len);
        let (_, model) = load(bytes)?;
        let names = model
            .quantities
            .iter()
            .map(|q| CString::new(q.name()).unwrap_or_default())
            .collect();
        *slot = Box::into_raw(Box::new(GsDocument { model, names }));
        Ok(())
    })
}

/// # Safety
/// `doc` must be NULL or a handle from `gs_document_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gs_document_free(doc: *mut GsDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Number of quantities in the document; 0 for NULL.
///
/// # Safety
/// `doc` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gs_document_quantity_count(doc: *const GsDocument) -> usize {
    doc.as_ref().map_or(0, |d| d.names.len())
}

/// Name of quantity `index`, owned by the document; NULL when out of range.
///
/// # Safety
/// `doc` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gs_document_quantity_name(
    doc: *const GsDocument,
    index: usize,
) -> *const c_char {
    doc.as_ref()
        .and_then(|d| d.names.get(index))
        .map_or(ptr::null(), |n| n.as_ptr())
}

unsafe fn quantity(doc: &GsDocument, name: *const c_char) -> Result<&Quantity, Failure> {
    Ok(doc.model.quantity(text(name, "quantity name")?)?)
}

/// Independence, dependence and equivalence of two named quantities.
/// `strict_signs` quantifies over declared rather than realized signs.
///
/// # Safety
/// `doc` must be a live handle, names NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gs_relate(
    doc: *const GsDocument,
    left: *const c_char,
    right: *const c_char,
    strict_signs: bool,
    out_relation: *mut GsRelation,
) -> GsStatus {
    guard(|| {
        let doc = handle(doc, "doc")?;
        let slot = out(out_relation, "out_relation")?;
        let r = relate(
            quantity(doc, left)?,
            quantity(doc, right)?,
            scope(strict_signs),
        )?;
        *slot = GsRelation {
            left_constant: r.left_constant,
            right_constant: r.right_constant,
            independent: r.independent,
            left_determines_right: r.left_determines_right,
            right_determines_left: r.right_determines_left,
            equivalent: r.equivalent,
        };
        Ok(())
    })
}

/// Whether the `count` named quantities form a complete set at their
/// common arity.
///
/// # Safety
/// `names` must point to `count` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn gs_complete_set(
    doc: *const GsDocument,
    names: *const *const c_char,
    count: usize,
    strict_signs: bool,
    out_complete: *mut bool,
) -> GsStatus {
    guard(|| {
        let doc = handle(doc, "doc")?;
        let slot = out(out_complete, "out_complete")?;
        if names.is_null() && count > 0 {
            return Err(null("names"));
        }
        let members = (0..count)
            .map(|i| quantity(doc, *names.add(i)).cloned())
            .collect::<Result<Vec<_>, _>>()?;
        let arity = members.first().map_or(0, Quantity::arity);
        *slot = is_complete_set(&members, arity, scope(strict_signs))?.is_complete;
        Ok(())
    })
}

/// The named system of the document, or its default system when `name`
/// is NULL. Free with `gs_system_free`.
///
/// # Safety
/// `doc` must be a live handle; `name` NULL or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn gs_document_system(
    doc: *const GsDocument,
    name: *const c_char,
    out_system: *mut *mut GsSystem,
) -> GsStatus {
    guard(|| {
        let slot = out(out_system, "out_system")?;
        *slot = ptr::null_mut();
        let doc = handle(doc, "doc")?;
        let system = if name.is_null() {
            doc.model.default_system()?
        } else {
            doc.model.system(text(name, "system name")?)?.clone()
        };
        *slot = Box::into_raw(Box::new(GsSystem { system }));
        Ok(())
    })
}

/// # Safety
/// `system` must be NULL or a handle from `gs_document_system` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gs_system_free(system: *mut GsSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Canonical certificate bytes. Equal certificates mean isomorphic systems.
/// Release the buffer with `gs_bytes_free`.
///
/// # Safety
/// `system` must be a live handle; both out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn gs_canonical_form(
    system: *const GsSystem,
    relabel_signs: bool,
    out_data: *mut *mut u8,
    out_len: *mut usize,
) -> GsStatus {
    guard(|| {
        let data = out(out_data, "out_data")?;
        let len = out(out_len, "out_len")?;
        *data = ptr::null_mut();
        *len = 0;
        let system = handle(system, "system")?;
        let cert = canonical_form(&system.system, mode(relabel_signs))?;
        let bytes: Box<[u8]> = cert.as_bytes().into();
        *len = bytes.len();
        *data = Box::into_raw(bytes).cast();
        Ok(())
    })
}

/// # Safety
/// `data` and `len` must come from one `gs_canonical_form` call, or `data`
/// must be NULL.
#[no_mangle]
pub unsafe extern "C" fn gs_bytes_free(data: *mut u8, len: usize) {
    if !data.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(data, len)));
    }
}

/// # Safety
/// Both systems must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gs_is_isomorphic(
    a: *const GsSystem,
    b: *const GsSystem,
    relabel_signs: bool,
    out_isomorphic: *mut bool,
) -> GsStatus {
    guard(|| {
        let slot = out(out_isomorphic, "out_isomorphic")?;
        let (a, b) = (handle(a, "a")?, handle(b, "b")?);
        *slot = find_isomorphism(&a.system, &b.system, mode(relabel_signs))?.is_some();
        Ok(())
    })
}
