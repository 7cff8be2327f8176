package com.demo.scheme12;

import android.app.Activity;
import android.os.Bundle;
import com.inmobi.ads.InMobiBanner;

public class SecondActivity extends Activity {
    @Override
    protected void onCreate(Bundle savedInstanceState) {
        super.onCreate(savedInstanceState);
        setContentView(R.layout.activity_second);
        InMobiBanner banner = new InMobiBanner(this, 1471550843414L);
        banner.load();
    }
}
