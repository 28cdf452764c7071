//! Drives the C ABI the way a foreign caller would: through raw pointers
//! and status codes.

use std::ffi::CString;
use std::ptr;

use bytescan_capi::*;

fn html_set() -> *mut BytescanCharset {
    let set = bytescan_charset_html();
    assert!(!set.is_null());
    set
}

#[test]
fn charset_new_validates_members() {
    unsafe {
        let mut out = ptr::null_mut();
        let members = [0x3Cu8, 0x0D, 0x26, 0x00];
        assert_eq!(
            bytescan_charset_new(members.as_ptr(), members.len(), &mut out),
            BytescanStatus::Ok
        );
        assert!(bytescan_charset_contains(out, b'<'));
        assert!(!bytescan_charset_contains(out, b' '));
        assert_eq!(bytescan_charset_member_count(out), 4);

        let mut buf = [0u8; 16];
        let n = bytescan_charset_members(out, buf.as_mut_ptr(), buf.len());
        assert_eq!(n, 4);
        assert_eq!(&buf[..4], &members);
        bytescan_charset_free(out);

        let mut out = ptr::null_mut();
        let colliding = [0x26u8, 0x36];
        assert_eq!(
            bytescan_charset_new(colliding.as_ptr(), colliding.len(), &mut out),
            BytescanStatus::NibbleCollision
        );
        assert_eq!(
            bytescan_charset_new(ptr::null(), 3, &mut out),
            BytescanStatus::NullArg
        );
        assert_eq!(
            bytescan_charset_new(members.as_ptr(), 0, &mut out),
            BytescanStatus::EmptySet
        );
    }
}

#[test]
fn charset_from_spec_matches_names() {
    unsafe {
        let spec = CString::new("LT,CR,AMP,NUL").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(
            bytescan_charset_from_spec(spec.as_ptr(), &mut out),
            BytescanStatus::Ok
        );
        assert_eq!(bytescan_charset_member_count(out), 4);
        bytescan_charset_free(out);

        let bad = CString::new("LT,bogus").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(
            bytescan_charset_from_spec(bad.as_ptr(), &mut out),
            BytescanStatus::BadSpec
        );
    }
}

#[test]
fn kernel_names_round_trip() {
    unsafe {
        for (name, want) in [
            ("scalar", BytescanKernel::Scalar),
            ("webkit16", BytescanKernel::Webkit16),
            ("blink16", BytescanKernel::Blink16),
            ("index64", BytescanKernel::Index64),
        ] {
            let cname = CString::new(name).unwrap();
            let mut kernel = BytescanKernel::Scalar;
            assert_eq!(
                bytescan_kernel_from_name(cname.as_ptr(), &mut kernel),
                BytescanStatus::Ok
            );
            assert_eq!(kernel, want);
            let back = bytescan_kernel_name(kernel);
            assert_eq!(std::ffi::CStr::from_ptr(back).to_str().unwrap(), name);
        }
        let unknown = CString::new("index65").unwrap();
        let mut kernel = BytescanKernel::Scalar;
        assert_eq!(
            bytescan_kernel_from_name(unknown.as_ptr(), &mut kernel),
            BytescanStatus::BadKernel
        );
    }
}

#[test]
fn stream_yields_ascending_positions() {
    unsafe {
        let set = html_set();
        let data = b"<a><b>";
        for kernel in [
            BytescanKernel::Scalar,
            BytescanKernel::Webkit16,
            BytescanKernel::Blink16,
            BytescanKernel::Index64,
        ] {
            let mut stream = ptr::null_mut();
            assert_eq!(
                bytescan_stream_new(set, data.as_ptr(), data.len(), kernel, &mut stream),
                BytescanStatus::Ok
            );
            let mut got = Vec::new();
            let mut pos = 0usize;
            while bytescan_stream_next(stream, &mut pos) {
                got.push(pos);
            }
            assert_eq!(got, vec![0, 3], "kernel {kernel:?}");
            // Exhausted streams stay exhausted.
            assert!(!bytescan_stream_next(stream, &mut pos));
            bytescan_stream_free(stream);
        }
        bytescan_charset_free(set);
    }
}

#[test]
fn stream_metrics_count_blocks_and_tail() {
    unsafe {
        let set = html_set();
        let data = [b'x'; 200];
        let mut stream = ptr::null_mut();
        assert_eq!(
            bytescan_stream_new(
                set,
                data.as_ptr(),
                data.len(),
                BytescanKernel::Index64,
                &mut stream
            ),
            BytescanStatus::Ok
        );
        let mut pos = 0usize;
        while bytescan_stream_next(stream, &mut pos) {}
        let mut blocks = 0u64;
        let mut tail = 0u64;
        assert_eq!(
            bytescan_stream_metrics(stream, &mut blocks, &mut tail),
            BytescanStatus::Ok
        );
        assert_eq!(blocks, 3);
        assert_eq!(tail, 8);
        bytescan_stream_free(stream);
        bytescan_charset_free(set);
    }
}

#[test]
fn one_shot_helpers() {
    unsafe {
        let set = html_set();
        let data = b"abc<def&";
        let mut pos = 0usize;
        assert!(bytescan_next_match(
            set,
            data.as_ptr(),
            data.len(),
            0,
            BytescanKernel::Blink16,
            &mut pos
        ));
        assert_eq!(pos, 3);
        assert!(bytescan_next_match(
            set,
            data.as_ptr(),
            data.len(),
            4,
            BytescanKernel::Index64,
            &mut pos
        ));
        assert_eq!(pos, 7);
        assert!(!bytescan_next_match(
            set,
            data.as_ptr(),
            data.len(),
            8,
            BytescanKernel::Scalar,
            &mut pos
        ));

        let mut count = 0u64;
        let mut ratio = 0f64;
        assert_eq!(
            bytescan_count_matches(
                set,
                data.as_ptr(),
                data.len(),
                BytescanKernel::Index64,
                &mut count,
                &mut ratio
            ),
            BytescanStatus::Ok
        );
        assert_eq!(count, 2);
        assert!((ratio - 0.25).abs() < 1e-12);
        bytescan_charset_free(set);
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        let mut pos = 0usize;
        assert!(!bytescan_stream_next(ptr::null_mut(), &mut pos));
        assert!(!bytescan_charset_contains(ptr::null(), b'<'));
        assert_eq!(bytescan_charset_member_count(ptr::null()), 0);
        let set = html_set();
        assert_eq!(
            bytescan_stream_new(
                set,
                ptr::null(),
                4,
                BytescanKernel::Scalar,
                &mut ptr::null_mut()
            ),
            BytescanStatus::NullArg
        );
        let mut count = 0u64;
        assert_eq!(
            bytescan_count_matches(
                ptr::null(),
                ptr::null(),
                0,
                BytescanKernel::Scalar,
                &mut count,
                ptr::null_mut()
            ),
            BytescanStatus::NullArg
        );
        bytescan_charset_free(set);
        // Frees of NULL are no-ops.
        bytescan_charset_free(ptr::null_mut());
        bytescan_stream_free(ptr::null_mut());
    }
}

#[test]
fn simd_flag_is_callable() {
    // Either answer is valid; the call itself must be safe.
    let _ = bytescan_simd_active();
}

/// The generated header must stand alone as C.
#[test]
fn generated_header_compiles_as_c() {
    let manifest = std::env::var("CARGO_MANIFEST_DIR").unwrap();
    let header = std::path::Path::new(&manifest).join("include/bytescan.h");
    assert!(header.exists(), "header not generated at {header:?}");
    let text = std::fs::read_to_string(&header).unwrap();
    for symbol in [
        "bytescan_charset_new",
        "bytescan_stream_next",
        "bytescan_count_matches",
        "BYTESCAN_STATUS_NIBBLE_COLLISION",
        "BYTESCAN_KERNEL_INDEX64",
    ] {
        assert!(text.contains(symbol), "header is missing {symbol}");
    }

    let gcc = std::process::Command::new("gcc")
        .args(["-fsyntax-only", "-std=c99", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .output();
    match gcc {
        Ok(out) => assert!(
            out.status.success(),
            "gcc rejected the header:\n{}",
            String::from_utf8_lossy(&out.stderr)
        ),
        Err(_) => eprintln!("gcc not available; skipped the C syntax check"),
    }
}
