package com.demo.scheme12;

public final class R {
    public static final class id {
        public static final int nextButton = 0x7f0b0001;
    }
    public static final class layout {
        public static final int activity_main = 0x7f030000;
        public static final int activity_second = 0x7f030001;
    }
}
