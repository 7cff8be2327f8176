package com.demo.scheme10;

import android.app.Activity;
import android.os.Bundle;
import com.google.android.gms.ads.AdRequest;

public class MainActivity extends Activity {
    @Override
    protected void onCreate(Bundle savedInstanceState) {
        super.onCreate(savedInstanceState);
        setContentView(R.layout.activity_main);
        com.google.android.gms.ads.InterstitialAd ad =
                new com.google.android.gms.ads.InterstitialAd(this);
        ad.loadAd(new AdRequest.Builder().build());
    }
}
