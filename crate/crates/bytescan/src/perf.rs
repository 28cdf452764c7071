//! Retired-instruction and cycle counters, where the OS offers them.
//!
//! Counter access is strictly optional: on Linux it goes through perf
//! events, which many containers and locked-down kernels refuse, and on
//! other platforms it is not attempted at all. Callers treat any error as
//! "counters unavailable" and carry on.

/// Counter readings taken at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterSample {
    pub instructions: u64,
    pub cycles: u64,
}

impl CounterSample {
    /// Per-field difference against an earlier sample.
    pub fn delta(self, earlier: CounterSample) -> CounterSample {
        CounterSample {
            instructions: self.instructions.wrapping_sub(earlier.instructions),
            cycles: self.cycles.wrapping_sub(earlier.cycles),
        }
    }
}

pub use imp::Counters;

#[cfg(target_os = "linux")]
mod imp {
    use super::CounterSample;
    use std::io;

    // perf_event_attr, version 0 layout (64 bytes). Only the leading fields
    // are populated; the kernel accepts any published size.
    #[repr(C)]
    #[derive(Clone, Copy)]
    struct PerfEventAttrV0 {
        type_: u32,
        size: u32,
        config: u64,
        sample_period: u64,
        sample_type: u64,
        read_format: u64,
        flags: u64,
        wakeup_events: u32,
        bp_type: u32,
        config1: u64,
    }

    const PERF_TYPE_HARDWARE: u32 = 0;
    const PERF_COUNT_HW_CPU_CYCLES: u64 = 0;
    const PERF_COUNT_HW_INSTRUCTIONS: u64 = 1;
    // Flag bits: exclude_kernel (bit 5) and exclude_hv (bit 6).
    const FLAGS_EXCLUDE_KERNEL_HV: u64 = (1 << 5) | (1 << 6);

    /// A pair of open hardware counters for the calling process.
    pub struct Counters {
        instructions_fd: i32,
        cycles_fd: i32,
    }

    impl Counters {
        pub fn open() -> io::Result<Self> {
            let instructions_fd = open_counter(PERF_COUNT_HW_INSTRUCTIONS)?;
            let cycles_fd = match open_counter(PERF_COUNT_HW_CPU_CYCLES) {
                Ok(fd) => fd,
                Err(e) => {
                    // SAFETY: fd came from perf_event_open above.
                    unsafe { libc::close(instructions_fd) };
                    return Err(e);
                }
            };
            Ok(Counters {
                instructions_fd,
                cycles_fd,
            })
        }

        pub fn read(&self) -> io::Result<CounterSample> {
            Ok(CounterSample {
                instructions: read_counter(self.instructions_fd)?,
                cycles: read_counter(self.cycles_fd)?,
            })
        }
    }

    impl Drop for Counters {
        fn drop(&mut self) {
            // SAFETY: both fds came from perf_event_open.
            unsafe {
                libc::close(self.instructions_fd);
                libc::close(self.cycles_fd);
            }
        }
    }

    fn open_counter(config: u64) -> io::Result<i32> {
        let attr = PerfEventAttrV0 {
            type_: PERF_TYPE_HARDWARE,
            size: std::mem::size_of::<PerfEventAttrV0>() as u32,
            config,
            sample_period: 0,
            sample_type: 0,
            read_format: 0,
            flags: FLAGS_EXCLUDE_KERNEL_HV,
            wakeup_events: 0,
            bp_type: 0,
            config1: 0,
        };
        // SAFETY: attr points at a properly sized, fully initialized struct;
        // pid 0 / cpu -1 counts this process on any cpu.
        let fd = unsafe {
            libc::syscall(
                libc::SYS_perf_event_open,
                &attr as *const PerfEventAttrV0,
                0i32,
                -1i32,
                -1i32,
                0u64,
            )
        };
        if fd < 0 {
            return Err(io::Error::last_os_error());
        }
        Ok(fd as i32)
    }

    fn read_counter(fd: i32) -> io::Result<u64> {
        let mut value = 0u64;
        // SAFETY: reading 8 bytes into a local u64 from an open counter fd.
        let n = unsafe {
            libc::read(
                fd,
                &mut value as *mut u64 as *mut libc::c_void,
                std::mem::size_of::<u64>(),
            )
        };
        if n != std::mem::size_of::<u64>() as isize {
            return Err(io::Error::new(
                io::ErrorKind::UnexpectedEof,
                "short counter read",
            ));
        }
        Ok(value)
    }
}

#[cfg(not(target_os = "linux"))]
mod imp {
    use super::CounterSample;
    use std::io;

    pub struct Counters {}

    impl Counters {
        pub fn open() -> io::Result<Self> {
            Err(io::Error::new(
                io::ErrorKind::Unsupported,
                "hardware counters are not supported on this platform",
            ))
        }

        pub fn read(&self) -> io::Result<CounterSample> {
            Err(io::Error::new(io::ErrorKind::Unsupported, "unreachable"))
        }
    }
}
